#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modforms2/rational.hpp"

namespace modforms2 {

// Truncated Laurent series in x where x^24 = q. Exponents are integers in
// 1/24-of-a-power-of-q units, so the theta series (1/8-steps), the eta
// function (1/24 offset) and every integer-q expansion live on one grid.
//
// A series knows its coefficients exactly on [valuation, precision):
//   e <  valuation          -> exactly zero
//   valuation <= e < prec   -> stored value, absent means exactly zero
//   e >= precision          -> unknown (asking is an error)
//
// Precision propagates pessimistically through every operation; a reported
// coefficient is always exactly correct.
class LaurentSeries {
 public:
  // Sentinel for series whose coefficients are known at every exponent
  // (constants, monomials, finite polynomials entered literally).
  static constexpr long kExactPrecision = std::numeric_limits<long>::max() / 4;

  using TermMap = std::map<long, Rational>;

  LaurentSeries() : valuation_(kExactPrecision), precision_(kExactPrecision) {}

  static LaurentSeries zero(long precision24) {
    LaurentSeries s;
    s.valuation_ = precision24;
    s.precision_ = precision24;
    return s;
  }

  static LaurentSeries constant(Rational c) {
    return monomial(std::move(c), 0);
  }

  static LaurentSeries monomial(Rational c, long exponent24,
                                long precision24 = kExactPrecision) {
    LaurentSeries s;
    s.precision_ = precision24;
    if (c != 0 && exponent24 < precision24) s.coeffs_.emplace(exponent24, std::move(c));
    s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
    return s;
  }

  static LaurentSeries from_terms(TermMap terms, long precision24) {
    LaurentSeries s;
    s.precision_ = precision24;
    for (auto& [e, c] : terms) {
      if (e >= precision24) continue;
      if (c != 0) s.coeffs_.emplace(e, std::move(c));
    }
    s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
    return s;
  }

  long valuation() const { return valuation_; }
  long precision() const { return precision_; }
  bool is_exact() const { return precision_ >= kExactPrecision; }
  // Zero at every known exponent.
  bool known_zero() const { return coeffs_.empty(); }
  const TermMap& terms() const { return coeffs_; }

  Rational coeff(long exponent24) const {
    if (exponent24 >= precision_)
      throw series_error("coefficient at exponent " + std::to_string(exponent24) +
                         "/24 is beyond precision " + std::to_string(precision_) + "/24");
    auto it = coeffs_.find(exponent24);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  // Coefficient of q^n (n in whole powers of q).
  Rational coeff_q(long n) const { return coeff(24 * n); }

  LaurentSeries truncated_to(long precision24) const {
    if (precision24 >= precision_) return *this;
    LaurentSeries s;
    s.precision_ = precision24;
    for (const auto& [e, c] : coeffs_) {
      if (e >= precision24) break;
      s.coeffs_.emplace(e, c);
    }
    s.valuation_ = s.coeffs_.empty() ? std::min(valuation_, precision24)
                                     : s.coeffs_.begin()->first;
    if (s.coeffs_.empty()) s.valuation_ = s.precision_;
    return s;
  }

  // Copy with the coefficient at one exponent bumped; used by the
  // fault-injection tests.
  LaurentSeries perturbed(long exponent24, const Rational& delta) const {
    LaurentSeries s = *this;
    if (exponent24 >= s.precision_)
      throw series_error("perturbation beyond precision");
    Rational c = s.coeffs_.count(exponent24) ? s.coeffs_[exponent24] : Rational(0);
    c += delta;
    if (c == 0)
      s.coeffs_.erase(exponent24);
    else
      s.coeffs_[exponent24] = c;
    s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
    return s;
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.valuation_ == b.valuation_ && a.precision_ == b.precision_ &&
           a.coeffs_ == b.coeffs_;
  }

 private:
  static long clamp24(long p) { return std::min(p, kExactPrecision); }

  long valuation_;
  long precision_;
  TermMap coeffs_;

  friend LaurentSeries add(const LaurentSeries&, const LaurentSeries&);
  friend LaurentSeries sub(const LaurentSeries&, const LaurentSeries&);
  friend LaurentSeries negate(const LaurentSeries&);
  friend LaurentSeries mul(const LaurentSeries&, const LaurentSeries&);
  friend LaurentSeries div(const LaurentSeries&, const LaurentSeries&);
  friend LaurentSeries scale_arg(const LaurentSeries&, long);
  friend LaurentSeries delta(const LaurentSeries&);
};

inline LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries s;
  s.precision_ = std::min(a.precision_, b.precision_);
  s.coeffs_ = a.coeffs_;
  for (const auto& [e, c] : b.coeffs_) {
    auto [it, inserted] = s.coeffs_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) s.coeffs_.erase(it);
    }
  }
  std::erase_if(s.coeffs_, [&](const auto& t) { return t.first >= s.precision_; });
  s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
  return s;
}

inline LaurentSeries negate(const LaurentSeries& a) {
  LaurentSeries s = a;
  for (auto& [e, c] : s.coeffs_) c = -c;
  return s;
}

inline LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) {
  return add(a, negate(b));
}

// Cauchy product. Result valuation = va + vb, result precision
// min(pa + vb, pb + va): the first unknown coefficient of either factor
// pollutes everything from (its exponent + other valuation) onward.
inline LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries s;
  s.precision_ = LaurentSeries::clamp24(
      std::min(a.precision_ + b.valuation_, b.precision_ + a.valuation_));
  for (const auto& [ea, ca] : a.coeffs_) {
    for (const auto& [eb, cb] : b.coeffs_) {
      long e = ea + eb;
      if (e >= s.precision_) break;  // b sorted ascending
      Rational prod = ca * cb;
      auto [it, inserted] = s.coeffs_.emplace(e, prod);
      if (!inserted) {
        it->second += prod;
        if (it->second == 0) s.coeffs_.erase(it);
      }
    }
  }
  s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
  return s;
}

// Laurent division: the divisor's leading coefficient must be known and
// nonzero. The quotient's precision is min(pa - vb, pb + va - 2 vb), i.e.
// multiplication by the inverted divisor.
inline LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b) {
  if (b.coeffs_.empty())
    throw series_error("zero divisor: divisor is identically zero to its precision");
  const long vb = b.valuation_;
  const Rational& lead = b.coeffs_.begin()->second;

  // Monomial divisor: exact shift-and-scale, no precision cliff.
  if (b.coeffs_.size() == 1 && b.is_exact()) {
    LaurentSeries s;
    s.precision_ = LaurentSeries::clamp24(a.precision_ - vb);
    for (const auto& [e, c] : a.coeffs_) s.coeffs_.emplace(e - vb, c / lead);
    s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
    return s;
  }

  if (a.is_exact() && b.is_exact())
    throw series_error(
        "insufficient precision: dividing exact series yields infinitely many "
        "coefficients; truncate an operand first");

  const long vq = a.valuation_ - vb;
  const long prec = LaurentSeries::clamp24(
      std::min(a.precision_ - vb, b.precision_ + a.valuation_ - 2 * vb));
  if (a.coeffs_.empty()) return LaurentSeries::zero(prec);
  if (prec <= vq) return LaurentSeries::zero(LaurentSeries::clamp24(prec));

  // Dense recurrence over the quotient window, sparse loop over divisor terms:
  // q_e = (a_{e+vb} - sum_{eb>vb} b_{eb} q_{e+vb-eb}) / lead.
  const std::size_t window = static_cast<std::size_t>(prec - vq);
  std::vector<Rational> q(window, Rational(0));
  for (long e = vq; e < prec; ++e) {
    Rational acc(0);
    auto it = a.coeffs_.find(e + vb);
    if (it != a.coeffs_.end()) acc = it->second;
    for (auto bt = std::next(b.coeffs_.begin()); bt != b.coeffs_.end(); ++bt) {
      long k = e + vb - bt->first;  // earlier quotient exponent
      if (k < vq) break;            // divisor terms sorted ascending
      const Rational& qk = q[static_cast<std::size_t>(k - vq)];
      if (qk != 0) acc -= bt->second * qk;
    }
    if (acc != 0) q[static_cast<std::size_t>(e - vq)] = acc / lead;
  }

  LaurentSeries::TermMap terms;
  for (std::size_t i = 0; i < window; ++i)
    if (q[i] != 0) terms.emplace(vq + static_cast<long>(i), std::move(q[i]));
  return LaurentSeries::from_terms(std::move(terms), prec);
}

inline LaurentSeries int_pow(const LaurentSeries& a, long k) {
  if (k == 0) return LaurentSeries::constant(Rational(1));
  LaurentSeries base = k < 0 ? div(LaurentSeries::constant(Rational(1)), a) : a;
  unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
  LaurentSeries acc;
  bool have = false;
  while (n > 0) {
    if (n & 1) {
      acc = have ? mul(acc, base) : base;
      have = true;
    }
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return acc;
}

// f(z) -> f(mz), i.e. q -> q^m: every exponent and the precision scale by m.
inline LaurentSeries scale_arg(const LaurentSeries& a, long m) {
  if (m < 1) throw series_error("scale_arg requires a positive multiplier");
  if (m == 1) return a;
  LaurentSeries s;
  s.precision_ = a.is_exact() ? LaurentSeries::kExactPrecision
                              : LaurentSeries::clamp24(a.precision_ * m);
  for (const auto& [e, c] : a.coeffs_) s.coeffs_.emplace(e * m, c);
  s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
  return s;
}

// delta = q d/dq: multiplies the coefficient at exponent e (1/24 units) by e/24.
inline LaurentSeries delta(const LaurentSeries& a) {
  LaurentSeries s;
  s.precision_ = a.precision_;
  for (const auto& [e, c] : a.coeffs_) {
    if (e == 0) continue;
    s.coeffs_.emplace(e, c * make_rational(e, 24));
  }
  s.valuation_ = s.coeffs_.empty() ? s.precision_ : s.coeffs_.begin()->first;
  return s;
}

inline LaurentSeries dlog(const LaurentSeries& a) { return div(delta(a), a); }

struct Mismatch {
  long exponent24 = 0;
  Rational lhs;
  Rational rhs;
};

struct EqResult {
  bool equal = true;
  std::optional<Mismatch> mismatch;
};

// Compares all coefficients at exponents < bound24. Both operands must know
// their coefficients that far.
inline EqResult eq_to_order(const LaurentSeries& a, const LaurentSeries& b,
                            long bound24) {
  if (a.precision() < bound24)
    throw series_error("insufficient precision in left operand: have " +
                       std::to_string(a.precision()) + "/24, need " +
                       std::to_string(bound24) + "/24");
  if (b.precision() < bound24)
    throw series_error("insufficient precision in right operand: have " +
                       std::to_string(b.precision()) + "/24, need " +
                       std::to_string(bound24) + "/24");
  auto ia = a.terms().begin(), ea = a.terms().end();
  auto ib = b.terms().begin(), eb = b.terms().end();
  while (ia != ea || ib != eb) {
    long xa = ia != ea ? ia->first : bound24;
    long xb = ib != eb ? ib->first : bound24;
    long e = std::min(xa, xb);
    if (e >= bound24) break;
    Rational ca = (xa == e) ? (ia++)->second : Rational(0);
    Rational cb = (xb == e) ? (ib++)->second : Rational(0);
    if (ca != cb) return {false, Mismatch{e, ca, cb}};
  }
  return {true, std::nullopt};
}

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return sub(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a) { return negate(a); }
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return mul(a, b); }
inline LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return div(a, b); }
inline LaurentSeries operator*(const Rational& c, const LaurentSeries& a) {
  return mul(LaurentSeries::constant(c), a);
}

// lambda^degree * body, where lambda stands for pi*i. Every differential
// identity handled here is homogeneous in lambda, so sums never need to mix
// degrees; attempting to do so is an error, not a coercion.
class GradedSeries {
 public:
  GradedSeries() : degree_(0) {}
  GradedSeries(long lambda_degree, LaurentSeries body)
      : degree_(lambda_degree), body_(std::move(body)) {}

  static GradedSeries constant(Rational c) {
    return GradedSeries(0, LaurentSeries::constant(std::move(c)));
  }

  long lambda_degree() const { return degree_; }
  const LaurentSeries& body() const { return body_; }

  GradedSeries with_degree(long d) const { return GradedSeries(d, body_); }

 private:
  long degree_;
  LaurentSeries body_;
};

inline GradedSeries add(const GradedSeries& a, const GradedSeries& b) {
  if (a.lambda_degree() != b.lambda_degree())
    throw grading_error("cannot add series of lambda-degree " +
                            std::to_string(a.lambda_degree()) + " and " +
                            std::to_string(b.lambda_degree()),
                        a.lambda_degree(), b.lambda_degree());
  return GradedSeries(a.lambda_degree(), add(a.body(), b.body()));
}

inline GradedSeries sub(const GradedSeries& a, const GradedSeries& b) {
  if (a.lambda_degree() != b.lambda_degree())
    throw grading_error("cannot subtract series of lambda-degree " +
                            std::to_string(a.lambda_degree()) + " and " +
                            std::to_string(b.lambda_degree()),
                        a.lambda_degree(), b.lambda_degree());
  return GradedSeries(a.lambda_degree(), sub(a.body(), b.body()));
}

inline GradedSeries negate(const GradedSeries& a) {
  return GradedSeries(a.lambda_degree(), negate(a.body()));
}

inline GradedSeries mul(const GradedSeries& a, const GradedSeries& b) {
  return GradedSeries(a.lambda_degree() + b.lambda_degree(), mul(a.body(), b.body()));
}

inline GradedSeries div(const GradedSeries& a, const GradedSeries& b) {
  return GradedSeries(a.lambda_degree() - b.lambda_degree(), div(a.body(), b.body()));
}

inline GradedSeries int_pow(const GradedSeries& a, long k) {
  return GradedSeries(a.lambda_degree() * k, int_pow(a.body(), k));
}

inline GradedSeries delta(const GradedSeries& a) {
  return GradedSeries(a.lambda_degree(), delta(a.body()));
}

// delta(f)/f; the lambda-power cancels, so the result has degree 0.
inline GradedSeries dlog(const GradedSeries& a) {
  return GradedSeries(0, dlog(a.body()));
}

inline GradedSeries scale_arg(const GradedSeries& a, long m) {
  return GradedSeries(a.lambda_degree(), scale_arg(a.body(), m));
}

// d/dz = 2 pi i delta: raises the lambda-degree by one and doubles delta.
inline GradedSeries z_deriv(const GradedSeries& a) {
  return GradedSeries(a.lambda_degree() + 1,
                      mul(LaurentSeries::constant(Rational(2)), delta(a.body())));
}

inline GradedSeries operator+(const GradedSeries& a, const GradedSeries& b) { return add(a, b); }
inline GradedSeries operator-(const GradedSeries& a, const GradedSeries& b) { return sub(a, b); }
inline GradedSeries operator-(const GradedSeries& a) { return negate(a); }
inline GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) { return mul(a, b); }
inline GradedSeries operator/(const GradedSeries& a, const GradedSeries& b) { return div(a, b); }
inline GradedSeries operator*(const Rational& c, const GradedSeries& a) {
  return GradedSeries(a.lambda_degree(), c * a.body());
}

// Coefficient dump, one stored exponent per line:
//   valuation=<v> precision=<p> lambda=<d>
//   <e>/24 <tab> <num>/<den>
inline void dump_series(std::ostream& os, const LaurentSeries& s, long lambda_degree = 0) {
  os << "valuation=" << s.valuation();
  if (s.is_exact())
    os << " precision=exact";
  else
    os << " precision=" << s.precision();
  os << " lambda=" << lambda_degree << "\n";
  for (const auto& [e, c] : s.terms()) os << e << "/24\t" << rational_dump(c) << "\n";
}

inline void dump_series(std::ostream& os, const GradedSeries& s) {
  dump_series(os, s.body(), s.lambda_degree());
}

inline std::string dump_to_string(const LaurentSeries& s, long lambda_degree = 0) {
  std::ostringstream os;
  dump_series(os, s, lambda_degree);
  return os.str();
}

// "q^-1 + 40 + 276*q - 2048*q^2" style rendering for demos and reports.
inline std::string pretty_q_expansion(const LaurentSeries& s, std::size_t max_terms = 12) {
  if (s.known_zero()) return "0";
  std::ostringstream os;
  std::size_t shown = 0;
  bool first = true;
  for (const auto& [e, c] : s.terms()) {
    if (shown++ == max_terms) {
      os << " + ...";
      break;
    }
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
      first = false;
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    bool unit = (a == 1) && e != 0;
    if (!unit) os << rational_pretty(a);
    if (e != 0) {
      if (!unit) os << "*";
      os << "q";
      if (e != 24) {
        if (e % 24 == 0)
          os << "^" << e / 24;
        else
          os << "^(" << e << "/24)";
      }
    }
  }
  return os.str();
}

}  // namespace modforms2
