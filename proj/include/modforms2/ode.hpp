#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "modforms2/complex_eval.hpp"
#include "modforms2/eval.hpp"

// The nonlinear vector fields cross-validated against the exact series:
// the Chazy equation, the third-order equation for the level-2 weight-2
// quasimodular series, the Darboux-Halphen system and its generalization,
// and the Schwarzian equation for the hauptmodul s. Third-order scalar
// equations are lifted to first-order systems on (f, f', f'').

namespace modforms2 {

class singularity_error : public numeric_error {
 public:
  singularity_error(const std::string& what, double magnitude)
      : numeric_error(what), magnitude_(magnitude) {}
  double magnitude() const { return magnitude_; }

 private:
  double magnitude_;
};

enum class FieldKind { chazy, chazy2, dh, gdh, schwarzian };

inline std::string field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::chazy: return "chazy";
    case FieldKind::chazy2: return "chazy2";
    case FieldKind::dh: return "dh";
    case FieldKind::gdh: return "gdh";
    case FieldKind::schwarzian: return "schwarzian";
  }
  return "?";
}

struct ODEField {
  FieldKind kind = FieldKind::chazy;
  Complex alpha{0, 0}, beta{0, 0}, gamma{0, 0};
  static constexpr int dimension = 3;
};

inline ODEField make_field(FieldKind kind, Complex alpha = {0, 0}, Complex beta = {0, 0},
                           Complex gamma = {0, 0}) {
  ODEField f;
  f.kind = kind;
  f.alpha = alpha;
  f.beta = beta;
  f.gamma = gamma;
  if (kind == FieldKind::dh) f.alpha = f.beta = f.gamma = Complex(0, 0);
  return f;
}

using State = std::vector<Complex>;

// V(s) = (1-a^2)/s^2 + (1-b^2)/(s-1)^2 + (a^2+b^2-g^2-1)/(s(s-1)).
inline Complex schwarz_potential(Complex s, Complex alpha, Complex beta, Complex gamma) {
  Complex a2 = alpha * alpha, b2 = beta * beta, g2 = gamma * gamma;
  return (1.0 - a2) / (s * s) + (1.0 - b2) / ((s - 1.0) * (s - 1.0)) +
         (a2 + b2 - g2 - 1.0) / (s * (s - 1.0));
}

inline State field_rhs(const ODEField& f, Complex /*z*/, const State& y) {
  switch (f.kind) {
    case FieldKind::chazy:
      // y''' = 2 y y'' - 3 y'^2
      return {y[1], y[2], 2.0 * y[0] * y[2] - 3.0 * y[1] * y[1]};
    case FieldKind::chazy2: {
      // y''' = 2 y y'' - y'^2 + 2 (y'' - y y')^2 / (2 y' - y^2)
      Complex den = 2.0 * y[1] - y[0] * y[0];
      double guard = 1e-8 * (1.0 + std::norm(y[0]));
      if (std::abs(den) < guard)
        throw singularity_error("denominator 2y' - y^2 too small: |" +
                                    complex_to_string(den) + "|",
                                std::abs(den));
      Complex num = y[2] - y[0] * y[1];
      return {y[1], y[2],
              2.0 * y[0] * y[2] - y[1] * y[1] + 2.0 * num * num / den};
    }
    case FieldKind::dh:
    case FieldKind::gdh: {
      Complex a2 = f.alpha * f.alpha, b2 = f.beta * f.beta, g2 = f.gamma * f.gamma;
      Complex tau2 = a2 * (y[0] - y[1]) * (y[1] - y[2]) +
                     b2 * (y[1] - y[0]) * (y[0] - y[2]) +
                     g2 * (y[2] - y[0]) * (y[1] - y[2]);
      return {y[1] * y[2] - y[0] * (y[1] + y[2]) + tau2,
              y[2] * y[0] - y[1] * (y[2] + y[0]) + tau2,
              y[0] * y[1] - y[2] * (y[0] + y[1]) + tau2};
    }
    case FieldKind::schwarzian: {
      // s''' = (3/2) s''^2/s' - (s'^3/2) V(s)
      Complex s = y[0], s1 = y[1], s2 = y[2];
      double scale = 1.0 + std::abs(s);
      if (std::abs(s) < 1e-10 * scale || std::abs(s - 1.0) < 1e-10 * scale)
        throw singularity_error("s too close to a singular point {0,1}",
                                std::min(std::abs(s), std::abs(s - 1.0)));
      if (std::abs(s1) < 1e-12 * scale)
        throw singularity_error("s' too small", std::abs(s1));
      return {s1, s2,
              1.5 * s2 * s2 / s1 -
                  0.5 * s1 * s1 * s1 * schwarz_potential(s, f.alpha, f.beta, f.gamma)};
    }
  }
  throw numeric_error("unknown field kind");
}

struct IntegrationResult {
  State state;
  long steps = 0;
  long rejected = 0;
};

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince pair) along the straight
// segment z0 -> z1, local error per unit step at most tol. Steps are rejected
// on error excess or on singularity-guard violations; persistent shrinking
// below the underflow floor raises an error.
template <typename Rhs>
IntegrationResult rk_integrate_field(Rhs&& rhs, State y, Complex z0, Complex z1,
                                     double tol) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double total = std::abs(z1 - z0);
  IntegrationResult out;
  if (total == 0.0) {
    out.state = std::move(y);
    return out;
  }
  const Complex dir = (z1 - z0) / total;
  const std::size_t n = y.size();

  auto eval_rhs = [&](double t, const State& s) {
    State d = rhs(z0 + dir * t, s);
    for (auto& v : d) v *= dir;  // chain rule along the segment
    return d;
  };

  double t = 0.0;
  double h = total / 16.0;
  const double h_min = total * 1e-13;
  State k1, k2, k3, k4, k5, k6, k7, tmp(n), y5(n);

  auto axpy = [&](const State& base, std::initializer_list<std::pair<double, const State*>> terms,
                  double hh) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = base[i];
      for (const auto& [w, v] : terms) acc += hh * w * (*v)[i];
      tmp[i] = acc;
    }
    return tmp;
  };

  bool have_k1 = false;
  while (t < total) {
    if (h > total - t) h = total - t;
    bool ok = true;
    double err = 0.0;
    try {
      if (!have_k1) {
        k1 = eval_rhs(t, y);
        have_k1 = true;
      }
      k2 = eval_rhs(t + c2 * h, axpy(y, {{a21, &k1}}, h));
      k3 = eval_rhs(t + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
      k4 = eval_rhs(t + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
      k5 = eval_rhs(t + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
      k6 = eval_rhs(t + h,
                    axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
      for (std::size_t i = 0; i < n; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      k7 = eval_rhs(t + h, y5);
      for (std::size_t i = 0; i < n; ++i) {
        Complex e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                         e7 * k7[i]);
        double scale = 1.0 + std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / scale);
      }
    } catch (const singularity_error&) {
      if (h <= h_min) throw;
      ok = false;
    }
    if (ok && err <= tol * h) {
      t += h;
      y = y5;
      k1 = k7;  // first-same-as-last
      ++out.steps;
      double grow = err > 0 ? 0.9 * std::pow(tol * h / err, 0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      ++out.rejected;
      h *= ok ? std::clamp(0.9 * std::pow(err > 0 ? tol * h / err : 0.1, 0.2), 0.1, 0.5)
              : 0.5;
      if (h < h_min)
        throw numeric_error("step size underflow (singularity approach) at t=" +
                            std::to_string(t / total));
    }
  }
  out.state = std::move(y);
  return out;
}

inline IntegrationResult rk_integrate(const ODEField& f, State y0, Complex z0, Complex z1,
                                      double tol) {
  return rk_integrate_field(
      [&f](Complex z, const State& s) { return field_rhs(f, z, s); }, std::move(y0), z0,
      z1, tol);
}

// Series-side data for the fields: the graded solution vector whose value at
// z supplies initial data and reference endpoints.
//   chazy:      y = lam E2, (y, y', y'')
//   chazy2:     y = lam Ecal2, (y, y', y'')
//   dh:         (-1/2 v1, -1/2 v2, -1/2 v3)   [solves u' = u u - u(u+u)]
//   gdh:        (u1, u2, u3)
//   schwarzian: (s, s', s'')
struct FieldSeries {
  std::vector<GradedSeries> components;

  State value_at(Complex z) const {
    State out;
    out.reserve(components.size());
    for (const auto& g : components) out.push_back(eval_series(g, z).value);
    return out;
  }
};

// Fixed-length complex Taylor jets, enough to carry a function and its first
// three z-derivatives through products and quotients.
template <int N>
struct Jet {
  std::array<Complex, N> c{};

  static Jet constant(Complex v) {
    Jet j;
    j.c[0] = v;
    return j;
  }

  Complex derivative(int k) const {  // k-th derivative from Taylor coefficients
    double fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[static_cast<std::size_t>(k)] * fact;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < N; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < N; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator*(Complex s, const Jet& a) {
    Jet r;
    for (int i = 0; i < N; ++i) r.c[i] = s * a.c[i];
    return r;
  }
};

// y(z) = s''/s' - (1/(2s) + 1/(s-1)) s' turns Schwarzian solutions into
// solutions of the third-order equation. Given a numerically integrated
// Schwarzian state at z, this converts it to the three gDH variables,
// Taylor-propagates them through the (1/2,0,0) gDH field to get y, y', y'',
// y''' analytically, and returns the residual of the third-order equation.
inline double schwarzian_state_y_residual(const State& s_state) {
  constexpr int N = 5;
  const Complex s0 = s_state[0], s1 = s_state[1], s2 = s_state[2];
  const Complex core = s2 / s1;
  std::array<Jet<N>, 3> u;
  u[0] = Jet<N>::constant(-0.5 * (core - s1 / s0));
  u[1] = Jet<N>::constant(-0.5 * (core - s1 / (s0 - 1.0)));
  u[2] = Jet<N>::constant(-0.5 * (core - s1 / s0 - s1 / (s0 - 1.0)));

  // Taylor recursion: coefficient k of the field supplies coefficient k+1
  // of the solution.
  ODEField gdh = make_field(FieldKind::gdh, Complex(0.5, 0));
  Complex a2 = gdh.alpha * gdh.alpha;
  for (int k = 0; k + 1 < N; ++k) {
    Jet<N> tau2 = a2 * ((u[0] - u[1]) * (u[1] - u[2]));
    std::array<Jet<N>, 3> rhs = {u[1] * u[2] - u[0] * (u[1] + u[2]) + tau2,
                                 u[2] * u[0] - u[1] * (u[2] + u[0]) + tau2,
                                 u[0] * u[1] - u[2] * (u[0] + u[1]) + tau2};
    for (int i = 0; i < 3; ++i)
      u[i].c[static_cast<std::size_t>(k + 1)] =
          rhs[i].c[static_cast<std::size_t>(k)] / static_cast<double>(k + 1);
  }

  Jet<N> y = Complex(-1.0, 0) * (u[1] + u[2]);
  Complex y0 = y.derivative(0), y1 = y.derivative(1), y2 = y.derivative(2),
          y3 = y.derivative(3);
  State rhs = field_rhs(make_field(FieldKind::chazy2), Complex(0, 1), {y0, y1, y2});
  return std::abs(y3 - rhs[2]);
}

inline FieldSeries field_series(const ODEField& f, const Environment& env) {
  auto third_order = [](GradedSeries y) {
    GradedSeries y1 = z_deriv(y);
    return FieldSeries{{y, y1, z_deriv(y1)}};
  };
  switch (f.kind) {
    case FieldKind::chazy:
      return third_order(env.get("E2").with_degree(1));
    case FieldKind::chazy2:
      return third_order(env.get("Ecal2").with_degree(1));
    case FieldKind::dh: {
      Rational minus_half(-1, 2);
      return FieldSeries{{minus_half * env.get("v1"), minus_half * env.get("v2"),
                          minus_half * env.get("v3")}};
    }
    case FieldKind::gdh:
      return FieldSeries{{env.get("u1"), env.get("u2"), env.get("u3")}};
    case FieldKind::schwarzian:
      return third_order(env.get("s"));
  }
  throw numeric_error("unknown field kind");
}

}  // namespace modforms2
