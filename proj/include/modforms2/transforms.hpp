#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "modforms2/complex_eval.hpp"
#include "modforms2/ode.hpp"

// Numeric checks of the transformation behaviour under Moebius maps:
//  - the weight-2 quasimodular laws for E2 (full modular group) and for the
//    level-2 series Ecal2 (lower-left entry even), each with its c(cz+d)/pi i
//    correction term;
//  - solution-to-solution maps: the third-order equation for lam*Ecal2 and
//    the generalized Darboux-Halphen system are preserved by
//    y -> (cz+d)^{-2} y(gz) -+ c/(cz+d) with any determinant-1 complex
//    matrix; the residual of the target equation is evaluated with all
//    derivatives obtained analytically from the series via the chain rule.

namespace modforms2 {

enum class TransformLaw { e2_law, ecal2_law, y_transform, u_transform };

inline std::string transform_law_name(TransformLaw law) {
  switch (law) {
    case TransformLaw::e2_law: return "E2";
    case TransformLaw::ecal2_law: return "Ecal2";
    case TransformLaw::y_transform: return "y";
    case TransformLaw::u_transform: return "u";
  }
  return "?";
}

namespace detail {

// Derivatives of g(z) := f(gamma z) expressed through series derivatives of f
// at w = gamma z, with u = cz+d, w' = det/u^2. Only det = 1 is used here.
struct ChainedDerivs {
  Complex f0, f1, f2, f3;  // f, f', f'', f''' at w
};

inline ChainedDerivs series_derivs_at(const GradedSeries& f, Complex w) {
  GradedSeries d1 = z_deriv(f);
  GradedSeries d2 = z_deriv(d1);
  GradedSeries d3 = z_deriv(d2);
  return {eval_series(f, w).value, eval_series(d1, w).value, eval_series(d2, w).value,
          eval_series(d3, w).value};
}

}  // namespace detail

// |LHS - RHS| of the chosen law at z. For the solution-to-solution maps the
// returned value is the residual of the target equation at z for the
// transformed function.
inline double transform_residual(TransformLaw law, const Matrix2& m, Complex z,
                                 const Environment& env) {
  if (z.imag() <= 0) throw numeric_error("transform check requires Im z > 0");
  const Complex w = m.apply(z);
  if (w.imag() <= 0)
    throw numeric_error("matrix maps z out of the upper half-plane");
  const Complex u = m.cocycle(z);

  switch (law) {
    case TransformLaw::e2_law: {
      if (!m.is_sl2z()) throw numeric_error("E2 law requires an integer matrix of determinant 1");
      const GradedSeries& e2 = env.get("E2");
      Complex lhs = eval_series(e2, w).value;
      Complex rhs = u * u * eval_series(e2, z).value + 6.0 / kPiI * m.c * u;
      return std::abs(lhs - rhs);
    }
    case TransformLaw::ecal2_law: {
      if (!m.is_gamma0_2())
        throw numeric_error("Ecal2 law requires an integer matrix with even lower-left entry");
      const GradedSeries& ecal2 = env.get("Ecal2");
      Complex lhs = eval_series(ecal2, w).value;
      Complex rhs = u * u * eval_series(ecal2, z).value + 2.0 / kPiI * m.c * u;
      return std::abs(lhs - rhs);
    }
    case TransformLaw::y_transform: {
      // y = lam*Ecal2 solves the third-order equation; the map preserving its
      // solution set is y -> (cz+d)^{-2} y(gz) - 2c/(cz+d). (The correction
      // must be -2c/(cz+d), not -c/(cz+d): pushing the hauptmodul relation
      // y = s''/s' - (1/(2s)+1/(s-1)) s' through s -> s(gz) produces the
      // factor 2, and the equation is not scale-invariant.)
      if (std::abs(m.det() - 1.0) > 1e-9)
        throw numeric_error("y transform requires determinant 1");
      auto d = detail::series_derivs_at(env.get("Ecal2").with_degree(1), w);
      const Complex c = m.c;
      Complex u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
      Complex y = d.f0 / u2 - 2.0 * c / u;
      Complex y1 = -2.0 * c * d.f0 / u3 + d.f1 / u4 + 2.0 * c * c / u2;
      Complex y2 = 6.0 * c * c * d.f0 / u4 - 6.0 * c * d.f1 / (u4 * u) + d.f2 / (u4 * u2) -
                   4.0 * c * c * c / u3;
      Complex y3 = -24.0 * c * c * c * d.f0 / (u4 * u) + 36.0 * c * c * d.f1 / (u4 * u2) -
                   12.0 * c * d.f2 / (u4 * u3) + d.f3 / (u4 * u4) +
                   12.0 * c * c * c * c / u4;
      State rhs = field_rhs(make_field(FieldKind::chazy2), z, {y, y1, y2});
      return std::abs(y3 - rhs[2]);
    }
    case TransformLaw::u_transform: {
      if (std::abs(m.det() - 1.0) > 1e-9)
        throw numeric_error("u transform requires determinant 1");
      const Complex c = m.c;
      Complex u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
      State val(3), der(3);
      for (int i = 0; i < 3; ++i) {
        const GradedSeries& ui = env.get("u" + std::to_string(i + 1));
        Complex f0 = eval_series(ui, w).value;
        Complex f1 = eval_series(z_deriv(ui), w).value;
        val[static_cast<std::size_t>(i)] = f0 / u2 + c / u;
        der[static_cast<std::size_t>(i)] = -2.0 * c * f0 / u3 + f1 / u4 - c * c / u2;
      }
      ODEField gdh = make_field(FieldKind::gdh, Complex(0.5, 0));
      State rhs = field_rhs(gdh, z, val);
      double r = 0;
      for (int i = 0; i < 3; ++i)
        r = std::max(r, std::abs(der[static_cast<std::size_t>(i)] -
                                 rhs[static_cast<std::size_t>(i)]));
      return r;
    }
  }
  throw numeric_error("unknown transformation law");
}

// Deterministic pseudo-random matrices for the transformation batteries.
// Integer matrices are drawn with |entries| <= 10 and c^2 + d^2 small enough
// that Im(gamma z) stays usable for series evaluation at z = i: the law is
// evaluated at gamma(i) with Im = 1/(c^2+d^2), and order-60 series tails at
// |q| = exp(-2 pi/(c^2+d^2)) stay far below the 1e-9 gate only for
// c^2 + d^2 <= 5.
inline std::vector<Matrix2> random_integer_matrices(bool require_even_c, int count,
                                                    unsigned seed) {
  std::vector<std::array<long, 2>> cd;
  for (long c = -2; c <= 2; ++c) {
    for (long d = -2; d <= 2; ++d) {
      if (c * c + d * d > 5 || (c == 0 && std::abs(d) != 1)) continue;
      if (require_even_c && c % 2 != 0) continue;
      if (std::gcd(std::abs(c), std::abs(d)) != 1) continue;
      cd.push_back({c, d});
    }
  }
  std::vector<Matrix2> out;
  unsigned long state = seed;
  auto next = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<unsigned long>(state >> 33);
  };
  while (out.size() < static_cast<std::size_t>(count)) {
    auto [c, d] = cd[next() % cd.size()];
    // particular solution of a d - b c = 1, then shift a,b by multiples of c,d
    long a0 = 0, b0 = 0;
    for (long a = -10; a <= 10 && a0 == 0 && b0 == 0; ++a) {
      if (c == 0) {
        a0 = d;  // d = +-1
        b0 = static_cast<long>(next() % 21) - 10;
        break;
      }
      long num = a * d - 1;
      if (num % c == 0) {
        long b = num / c;
        if (std::abs(b) <= 10) {
          a0 = a;
          b0 = b;
        }
      }
    }
    if (a0 == 0 && b0 == 0) continue;
    long k = static_cast<long>(next() % 5) - 2;
    long a = a0 + k * c, b = b0 + k * d;
    if (std::abs(a) > 10 || std::abs(b) > 10) continue;
    Matrix2 mat;
    mat.a = static_cast<double>(a);
    mat.b = static_cast<double>(b);
    mat.c = static_cast<double>(c);
    mat.d = static_cast<double>(d);
    if (!mat.is_sl2z()) continue;
    out.push_back(mat);
  }
  return out;
}

// Random determinant-1 complex matrices, conditioned so that gamma(z) stays
// well inside the upper half-plane and the cocycle is O(1). The Im >= 0.6
// floor is not cosmetic: the Darboux-Halphen variables have poles on the
// orbit of the order-2 elliptic point (1+i)/2, so their q-expansions only
// converge for |q| < e^{-pi}, i.e. Im z > 1/2.
inline std::vector<Matrix2> random_complex_matrices(int count, unsigned seed, Complex z) {
  std::vector<Matrix2> out;
  unsigned long state = seed;
  auto uniform = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) / 9007199254740992.0 * 2.0 - 1.0;
  };
  while (out.size() < static_cast<std::size_t>(count)) {
    Matrix2 m;
    m.a = Complex(uniform(), uniform());
    m.b = Complex(uniform(), uniform());
    m.c = Complex(uniform(), uniform());
    m.d = Complex(uniform(), uniform());
    Complex det = m.det();
    if (std::abs(det) < 0.1) continue;
    Complex scale = std::sqrt(det);
    m.a /= scale;
    m.b /= scale;
    m.c /= scale;
    m.d /= scale;
    double au = std::abs(m.cocycle(z));
    if (au < 0.6 || au > 2.0) continue;
    if (m.apply(z).imag() < 0.6) continue;
    out.push_back(m);
  }
  return out;
}

}  // namespace modforms2
