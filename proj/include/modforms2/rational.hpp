#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace modforms2 {

// Exact rational arithmetic. mpq_class keeps values canonical (lowest terms,
// positive denominator) as long as raw num/den assignments are canonicalized,
// which make_rational takes care of.
using Integer = mpz_class;
using Rational = mpq_class;

class series_error : public std::runtime_error {
 public:
  explicit series_error(const std::string& what) : std::runtime_error(what) {}
};

class grading_error : public std::runtime_error {
 public:
  grading_error(const std::string& what, long lhs_degree, long rhs_degree)
      : std::runtime_error(what), lhs_degree_(lhs_degree), rhs_degree_(rhs_degree) {}
  long lhs_degree() const { return lhs_degree_; }
  long rhs_degree() const { return rhs_degree_; }

 private:
  long lhs_degree_;
  long rhs_degree_;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw series_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw series_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "123", "-4/5". Throws on malformed input.
inline Rational rational_from_string(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw series_error("malformed rational: '" + text + "'");
  r.canonicalize();
  return r;
}

// Always "num/den", e.g. "-24/1", matching the coefficient dump format.
inline std::string rational_dump(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// "num" when integral, "num/den" otherwise; used in human-facing reports.
inline std::string rational_pretty(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational rational_pow(const Rational& base, long k) {
  if (k == 0) return Rational(1);
  if (base == 0 && k < 0) throw series_error("zero to a negative power");
  Rational out;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  if (k < 0) {
    Rational inv;
    mpq_inv(inv.get_mpq_t(), out.get_mpq_t());
    return inv;
  }
  return out;
}

}  // namespace modforms2
