#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "modforms2/series.hpp"

namespace modforms2 {

using Complex = std::complex<double>;

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = std::numbers::pi;
inline const Complex kPiI{0.0, kPi};  // the value substituted for lambda

struct ComplexEval {
  Complex value{0.0, 0.0};
  // Geometric majorant |c_last| |q|^{e_last/24} / (1 - |q|^{1/24}) for the
  // dropped tail; heuristic, adequate in the |q| <= 0.01 regions used here.
  double tail = 0.0;
};

// Sum of c_e q^{e/24} at q = exp(2 pi i z), Im z > 0. Each power is taken as
// exp(pi i z e / 12), single-valued because z (not q) is the input.
inline ComplexEval eval_series(const LaurentSeries& f, Complex z) {
  if (z.imag() <= 0.0) throw numeric_error("series evaluation requires Im z > 0");
  ComplexEval out;
  const Complex i_pi_z_over_12 = Complex(0.0, 1.0) * kPi * z / 12.0;
  long last_e = 0;
  double last_c = 0.0;
  for (const auto& [e, c] : f.terms()) {
    double cd = c.get_d();
    if (!std::isfinite(cd))
      throw numeric_error("coefficient overflows double precision at exponent " +
                          std::to_string(e) + "/24");
    out.value += cd * std::exp(i_pi_z_over_12 * static_cast<double>(e));
    last_e = e;
    last_c = cd;
  }
  if (!f.terms().empty() && !f.is_exact()) {
    double abs_q = std::exp(-2.0 * kPi * z.imag());
    double r = std::pow(abs_q, 1.0 / 24.0);
    if (r < 1.0)
      out.tail = std::abs(last_c) * std::pow(abs_q, static_cast<double>(last_e) / 24.0) /
                 (1.0 - r);
    else
      out.tail = std::numeric_limits<double>::infinity();
  }
  return out;
}

inline ComplexEval eval_series(const GradedSeries& f, Complex z) {
  ComplexEval out = eval_series(f.body(), z);
  Complex factor = std::pow(kPiI, static_cast<double>(f.lambda_degree()));
  out.value *= factor;
  out.tail *= std::abs(factor);
  return out;
}

// Moebius matrix over the complexes with the group-membership predicates the
// transformation laws need.
struct Matrix2 {
  Complex a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

  Complex det() const { return a * d - b * c; }

  Complex apply(Complex z) const { return (a * z + b) / (c * z + d); }

  Complex cocycle(Complex z) const { return c * z + d; }

  static bool near_integer(Complex x, double eps = 1e-9) {
    return std::abs(x.imag()) < eps && std::abs(x.real() - std::round(x.real())) < eps;
  }

  bool is_sl2z(double eps = 1e-9) const {
    return near_integer(a, eps) && near_integer(b, eps) && near_integer(c, eps) &&
           near_integer(d, eps) && std::abs(det() - 1.0) < eps;
  }

  bool is_gamma0_2(double eps = 1e-9) const {
    return is_sl2z(eps) && near_integer(c / 2.0, eps);
  }
};

inline std::string complex_to_string(Complex z) {
  std::string re = std::to_string(z.real());
  std::string im = std::to_string(std::abs(z.imag()));
  return re + (z.imag() < 0 ? "-" : "+") + im + "i";
}

// Parses "i", "2", "-1.5i", "0.4+0.8i", "1-2i".
inline Complex parse_complex(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw numeric_error("empty complex literal");
  // split at the last '+'/'-' that is not a leading sign or exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < t.size(); ++k) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E')
      split = k;  // keep the last one
  }
  auto parse_part = [](std::string p, bool imaginary_ok) -> std::pair<double, bool> {
    bool imag = false;
    if (!p.empty() && (p.back() == 'i' || p.back() == 'I')) {
      if (!imaginary_ok) throw numeric_error("unexpected 'i'");
      imag = true;
      p.pop_back();
      if (p.empty() || p == "+") p = "1";
      if (p == "-") p = "-1";
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      throw numeric_error("malformed complex literal part '" + p + "'");
    }
    if (used != p.size()) throw numeric_error("malformed complex literal part '" + p + "'");
    return {v, imag};
  };
  if (split == std::string::npos) {
    auto [v, imag] = parse_part(t, true);
    return imag ? Complex(0, v) : Complex(v, 0);
  }
  auto [re, re_imag] = parse_part(t.substr(0, split), true);
  auto [im, im_imag] = parse_part(t.substr(split), true);
  if (re_imag == im_imag) throw numeric_error("malformed complex literal '" + text + "'");
  if (re_imag) std::swap(re, im);
  return Complex(re, im);
}

}  // namespace modforms2
