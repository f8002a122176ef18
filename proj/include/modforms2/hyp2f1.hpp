#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "modforms2/complex_eval.hpp"
#include "modforms2/ode.hpp"  // schwarz_potential

// Gauss hypergeometric series and the Schwarz-triangle consistency check:
// with angles (1/2, 0, 0) the hypergeometric parameters are a = b = 1/4,
// c = 1/2, and z(s) = 2F1(1/4,1/4,1/2;s) / (sqrt(s) 2F1(3/4,3/4,3/2;s))
// satisfies {z, s} = V(s)/2. This check is independent of the series and
// ODE machinery it cross-validates.
//
// The Schwarzian needs z', z'', z'''. The default mode differentiates the
// hypergeometric series analytically through the contiguous relation
// d/ds 2F1(a,b,c;s) = (ab/c) 2F1(a+1,b+1,c+1;s), which keeps the deviation
// near machine precision. A 5-point central-difference mode is kept as a
// cross-check, but its truncation error scales like h^2 z^(5), and z ~
// s^{-1/2} near 0 makes z^(5)(0.1) ~ 1e6: with h = 1e-3 the stencil cannot
// do better than ~0.1 at s = 0.1 in any arithmetic.

namespace modforms2 {

inline Complex hyp2f1(double a, double b, double c, Complex s) {
  if (std::abs(s) > 0.8)
    throw numeric_error("hyp2f1: |s| <= 0.8 required (got |s| = " +
                        std::to_string(std::abs(s)) + ")");
  if (c <= 0.0 && c == std::floor(c))
    throw numeric_error("hyp2f1: c must not be a nonpositive integer");
  Complex term{1.0, 0.0};
  Complex sum = term;
  for (int k = 0; k < 10000; ++k) {
    term *= s * ((a + k) * (b + k)) / ((c + k) * (1.0 + k));
    sum += term;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
  }
  throw numeric_error("hyp2f1: series did not converge");
}

namespace detail {

// f, f', f'', f''' of 2F1(a,b,c;.) at s.
inline std::array<Complex, 4> hyp2f1_derivs(double a, double b, double c, Complex s) {
  std::array<Complex, 4> out;
  double factor = 1.0;
  for (int k = 0; k < 4; ++k) {
    out[static_cast<std::size_t>(k)] = factor * hyp2f1(a + k, b + k, c + k, s);
    factor *= (a + k) * (b + k) / (c + k);
  }
  return out;
}

// Derivatives of f/g from derivatives of f and g (triangular solve of the
// Leibniz relations f^(k) = sum C(k,j) z^(j) g^(k-j)).
inline std::array<Complex, 4> ratio_derivs(const std::array<Complex, 4>& f,
                                           const std::array<Complex, 4>& g) {
  std::array<Complex, 4> z;
  z[0] = f[0] / g[0];
  z[1] = (f[1] - z[0] * g[1]) / g[0];
  z[2] = (f[2] - z[0] * g[2] - 2.0 * z[1] * g[1]) / g[0];
  z[3] = (f[3] - z[0] * g[3] - 3.0 * z[1] * g[2] - 3.0 * z[2] * g[1]) / g[0];
  return z;
}

}  // namespace detail

// z(s) = chi1/chi2 for the (1/2,0,0) triangle, real 0 < s < 1.
inline double schwarz_triangle_inverse(double s) {
  Complex chi1 = hyp2f1(0.25, 0.25, 0.5, s);
  Complex chi2 = std::sqrt(s) * hyp2f1(0.75, 0.75, 1.5, s);
  return (chi1 / chi2).real();
}

// (z, z', z'', z''') of the triangle map at real s via analytic
// differentiation of both hypergeometric solutions.
inline std::array<Complex, 4> schwarz_triangle_inverse_derivs(double s) {
  auto chi1 = detail::hyp2f1_derivs(0.25, 0.25, 0.5, s);
  auto g = detail::hyp2f1_derivs(0.75, 0.75, 1.5, s);
  double r = std::sqrt(s);
  std::array<Complex, 4> chi2;
  chi2[0] = r * g[0];
  chi2[1] = 0.5 / r * g[0] + r * g[1];
  chi2[2] = -0.25 / (r * s) * g[0] + 1.0 / r * g[1] + r * g[2];
  chi2[3] = 0.375 / (r * s * s) * g[0] - 0.75 / (r * s) * g[1] + 1.5 / r * g[2] + r * g[3];
  return detail::ratio_derivs(chi1, chi2);
}

enum class SchwarzMode { analytic, finite_difference };

struct SchwarzCheckResult {
  double max_deviation = 0.0;
  std::vector<double> deviations;
};

// max over samples of |{z(s), s} - V(s)/2| with V at (1/2, 0, 0).
inline SchwarzCheckResult schwarz_map_check(const std::vector<double>& samples,
                                            SchwarzMode mode = SchwarzMode::analytic,
                                            double h = 1e-3) {
  SchwarzCheckResult out;
  for (double s : samples) {
    if (s <= 0.05 || s >= 0.7)
      throw numeric_error("schwarz_map_check: samples must lie in (0.05, 0.7)");
    double z1, z2, z3;
    if (mode == SchwarzMode::analytic) {
      auto d = schwarz_triangle_inverse_derivs(s);
      z1 = d[1].real();
      z2 = d[2].real();
      z3 = d[3].real();
    } else {
      double zm2 = schwarz_triangle_inverse(s - 2 * h);
      double zm1 = schwarz_triangle_inverse(s - h);
      double z0 = schwarz_triangle_inverse(s);
      double zp1 = schwarz_triangle_inverse(s + h);
      double zp2 = schwarz_triangle_inverse(s + 2 * h);
      z1 = (-zp2 + 8 * zp1 - 8 * zm1 + zm2) / (12 * h);
      z2 = (-zp2 + 16 * zp1 - 30 * z0 + 16 * zm1 - zm2) / (12 * h * h);
      z3 = (zp2 - 2 * zp1 + 2 * zm1 - zm2) / (2 * h * h * h);
    }
    double schwarzian = z3 / z1 - 1.5 * (z2 / z1) * (z2 / z1);
    double v = schwarz_potential(Complex(s, 0), Complex(0.5, 0), Complex(0, 0),
                                 Complex(0, 0))
                   .real();
    double dev = std::abs(schwarzian - v / 2.0);
    out.deviations.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  return out;
}

}  // namespace modforms2
