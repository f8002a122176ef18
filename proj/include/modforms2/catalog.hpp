#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "modforms2/rational.hpp"
#include "modforms2/series.hpp"

// Constructors for the named q-series of level 1 and level 2: Eisenstein
// series on SL2(Z) and on the index-3 congruence subgroup with even lower-left
// entry, the discriminant Delta and its level-2 counterpart, the j-invariants,
// null theta constants, the Dedekind eta function, the hauptmoduln lambda and
// s, and the Darboux-Halphen variables. Orders are in whole powers of q;
// internally everything lives on the 1/24 exponent grid.

namespace modforms2 {

// k-th Bernoulli number via sum_{j<=m} C(m+1,j) B_j = 0, memoized.
inline Rational bernoulli(long k) {
  if (k < 0 || (k > 1 && k % 2 != 0))
    throw series_error("bernoulli: index must be 0, 1, or even and positive");
  static std::map<long, Rational> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<Rational> b;
  b.reserve(static_cast<std::size_t>(k) + 1);
  for (long m = 0; m <= k; ++m) {
    if (m == 0) {
      b.emplace_back(1);
      continue;
    }
    // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
    Rational acc(0);
    Integer binom(1);  // C(m+1, 0)
    for (long j = 0; j < m; ++j) {
      acc += Rational(binom) * b[static_cast<std::size_t>(j)];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b.push_back(-acc / Rational(m + 1));
  }
  for (long m = 0; m <= k; ++m) cache.emplace(m, b[static_cast<std::size_t>(m)]);
  return cache[k];
}

// sigma_k(n) = sum of k-th powers of the positive divisors of n.
inline Integer sigma(long k, long n) {
  if (n < 1) throw series_error("sigma: n must be positive");
  Integer total(0);
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    Integer dk, ek;
    mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                  static_cast<unsigned long>(k));
    total += dk;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(ek.get_mpz_t(), static_cast<unsigned long>(e),
                    static_cast<unsigned long>(k));
      total += ek;
    }
  }
  return total;
}

// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; E_2, E_4, E_6 are the classical
// P, Q, R series.
inline LaurentSeries eisenstein_level1(long k, long order_q) {
  if (k < 2 || k % 2 != 0) throw series_error("eisenstein_level1: k must be even, >= 2");
  Rational factor = Rational(-2 * k) / bernoulli(k);
  LaurentSeries::TermMap t;
  t.emplace(0, Rational(1));
  for (long n = 1; n < order_q; ++n) t.emplace(24 * n, factor * Rational(sigma(k - 1, n)));
  return LaurentSeries::from_terms(std::move(t), 24 * order_q);
}

// Level-2 Eisenstein series
//   1 + (2k/((1-2^k) B_k)) sum (-1)^n n^{k-1} q^n / (1 - q^n),
// Lambert terms expanded geometrically and regrouped by exponent.
inline LaurentSeries eisenstein_level2(long k, long order_q) {
  if (k < 2 || k % 2 != 0) throw series_error("eisenstein_level2: k must be even, >= 2");
  Integer two_k;
  mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(k));
  Rational factor = Rational(2 * k) / ((Rational(1) - Rational(two_k)) * bernoulli(k));
  std::vector<Integer> c(static_cast<std::size_t>(order_q), Integer(0));
  for (long n = 1; n < order_q; ++n) {
    Integer nk;
    mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(k - 1));
    if (n % 2 != 0) nk = -nk;
    for (long m = n; m < order_q; m += n) c[static_cast<std::size_t>(m)] += nk;
  }
  LaurentSeries::TermMap t;
  t.emplace(0, Rational(1));
  for (long n = 1; n < order_q; ++n)
    t.emplace(24 * n, factor * Rational(c[static_cast<std::size_t>(n)]));
  return LaurentSeries::from_terms(std::move(t), 24 * order_q);
}

enum class ETilde2Mode { lambert, odd_divisor, level1_combination };

// The weight-2 form 1 + 24 sum n q^n/(1+q^n); equivalently 24 times the sum
// of odd divisors at each exponent, or 2 E_2(2z) - E_2(z).
inline LaurentSeries e_tilde_2(long order_q, ETilde2Mode mode = ETilde2Mode::lambert) {
  switch (mode) {
    case ETilde2Mode::lambert: {
      // q^n/(1+q^n) = sum_j (-1)^{j+1} q^{jn}
      std::vector<long> c(static_cast<std::size_t>(order_q), 0);
      for (long n = 1; n < order_q; ++n)
        for (long j = 1; j * n < order_q; ++j)
          c[static_cast<std::size_t>(j * n)] += (j % 2 == 1) ? n : -n;
      LaurentSeries::TermMap t;
      t.emplace(0, Rational(1));
      for (long m = 1; m < order_q; ++m)
        t.emplace(24 * m, Rational(24) * Rational(c[static_cast<std::size_t>(m)]));
      return LaurentSeries::from_terms(std::move(t), 24 * order_q);
    }
    case ETilde2Mode::odd_divisor: {
      LaurentSeries::TermMap t;
      t.emplace(0, Rational(1));
      for (long m = 1; m < order_q; ++m) {
        long odd_sum = 0;
        for (long d = 1; d <= m; d += 2)
          if (m % d == 0) odd_sum += d;
        t.emplace(24 * m, Rational(24 * odd_sum));
      }
      return LaurentSeries::from_terms(std::move(t), 24 * order_q);
    }
    case ETilde2Mode::level1_combination: {
      LaurentSeries e2 = eisenstein_level1(2, order_q);
      return Rational(2) * scale_arg(e2, 2).truncated_to(24 * order_q) - e2;
    }
  }
  throw series_error("e_tilde_2: unknown mode");
}

namespace detail {
// prod_{n>=1} (1 - q^n), truncated.
inline LaurentSeries euler_product(long precision24) {
  LaurentSeries p = LaurentSeries::from_terms({{0, Rational(1)}}, precision24);
  for (long n = 1; 24 * n < precision24; ++n) {
    LaurentSeries factor = LaurentSeries::from_terms(
        {{0, Rational(1)}, {24 * n, Rational(-1)}}, precision24);
    p = mul(p, factor);
  }
  return p;
}
}  // namespace detail

enum class DeltaMode { eisenstein, product };

// Delta = (E_4^3 - E_6^2)/1728 = q prod (1-q^n)^24; the coefficients are the
// Ramanujan tau values.
inline LaurentSeries delta_fn(long order_q, DeltaMode mode = DeltaMode::eisenstein) {
  switch (mode) {
    case DeltaMode::eisenstein: {
      LaurentSeries e4 = eisenstein_level1(4, order_q);
      LaurentSeries e6 = eisenstein_level1(6, order_q);
      LaurentSeries num = int_pow(e4, 3) - mul(e6, e6);
      return div(num, LaurentSeries::constant(Rational(1728)));
    }
    case DeltaMode::product: {
      LaurentSeries p = detail::euler_product(24 * order_q);
      LaurentSeries p24 = int_pow(p, 24);
      return mul(LaurentSeries::monomial(Rational(1), 24), p24).truncated_to(24 * order_q);
    }
  }
  throw series_error("delta_fn: unknown mode");
}

// The weight-4 level-2 form (Et2^2 - Ecal4)/64 = q + 8q^2 + 28q^3 + ...; its
// q^{n+1} coefficient counts representations of n as a sum of 8 triangular
// numbers.
inline LaurentSeries d_cal(long order_q) {
  LaurentSeries et2 = e_tilde_2(order_q);
  LaurentSeries e4 = eisenstein_level2(4, order_q);
  return div(mul(et2, et2) - e4, LaurentSeries::constant(Rational(64)));
}

// j = E_4^3 / Delta, with the q^{-1} pole.
inline LaurentSeries j_fn(long order_q) {
  long inner = order_q + 2;  // dividing by Delta (valuation q) costs 2 orders
  LaurentSeries e4 = eisenstein_level1(4, inner);
  LaurentSeries num = int_pow(e4, 3);
  LaurentSeries j = div(num, delta_fn(inner));
  return j.truncated_to(24 * order_q);
}

// j2 = Et2^2 / Dcal, the level-2 hauptmodul scaled by 64.
inline LaurentSeries j2_fn(long order_q) {
  long inner = order_q + 2;
  LaurentSeries et2 = e_tilde_2(inner);
  LaurentSeries j2 = div(mul(et2, et2), d_cal(inner));
  return j2.truncated_to(24 * order_q);
}

// Null theta constants with nome q^{1/2}:
//   theta2 = 2 q^{1/8} sum q^{n(n+1)/2},  theta3 = sum q^{n^2/2},
//   theta4 = sum (-1)^n q^{n^2/2}.
inline LaurentSeries theta(int i, long order_q) {
  long precision24 = 24 * order_q;
  LaurentSeries::TermMap t;
  switch (i) {
    case 2:
      for (long n = 0;; ++n) {
        long e = 3 + 12 * n * (n + 1);  // 1/8 + n(n+1)/2 in 1/24 units
        if (e >= precision24) break;
        t.emplace(e, Rational(2));
      }
      break;
    case 3:
    case 4: {
      t.emplace(0, Rational(1));
      for (long n = 1;; ++n) {
        long e = 12 * n * n;  // n^2/2 in 1/24 units
        if (e >= precision24) break;
        t.emplace(e, (i == 3 || n % 2 == 0) ? Rational(2) : Rational(-2));
      }
      break;
    }
    default:
      throw series_error("theta: index must be 2, 3 or 4");
  }
  return LaurentSeries::from_terms(std::move(t), precision24);
}

// Dedekind eta = q^{1/24} prod (1-q^n).
inline LaurentSeries eta(long order_q) {
  LaurentSeries p = detail::euler_product(24 * order_q);
  return mul(LaurentSeries::monomial(Rational(1), 1), p).truncated_to(24 * order_q);
}

// The degree-2 level hauptmodul lambda = theta2^4 / theta3^4.
inline LaurentSeries lambda_fn(long order_q) {
  LaurentSeries t2 = theta(2, order_q + 1);
  LaurentSeries t3 = theta(3, order_q + 1);
  return div(int_pow(t2, 4), int_pow(t3, 4)).truncated_to(24 * order_q);
}

enum class SFnMode { j2_quarter, delta_quotient, theta_quotient };

// s = j2/64 = 1 + Delta(z)/(64 Delta(2z)) = ((theta3^4+theta4^4)/theta2^4)^2.
inline LaurentSeries s_fn(long order_q, SFnMode mode = SFnMode::j2_quarter) {
  switch (mode) {
    case SFnMode::j2_quarter:
      return div(j2_fn(order_q), LaurentSeries::constant(Rational(64)));
    case SFnMode::delta_quotient: {
      long inner = order_q + 2;
      LaurentSeries d = delta_fn(inner);
      LaurentSeries quot = div(d, scale_arg(d, 2));
      LaurentSeries one = LaurentSeries::constant(Rational(1));
      return (one + div(quot, LaurentSeries::constant(Rational(64))))
          .truncated_to(24 * order_q);
    }
    case SFnMode::theta_quotient: {
      long inner = order_q + 2;
      LaurentSeries t2 = theta(2, inner), t3 = theta(3, inner), t4 = theta(4, inner);
      LaurentSeries ratio = div(int_pow(t3, 4) + int_pow(t4, 4), int_pow(t2, 4));
      return mul(ratio, ratio).truncated_to(24 * order_q);
    }
  }
  throw series_error("s_fn: unknown mode");
}

enum class GdhUMode { from_s, from_theta };

// Solutions of the generalized Darboux-Halphen system with parameters
// (1/2, 0, 0), as logarithmic-derivative combinations of s:
//   u1 = -1/2 [ln(s'/s)]',  u2 = -1/2 [ln(s'/(s-1))]',
//   u3 = -1/2 [ln(s'/(s(s-1)))]'.
// In delta-form each is -lambda [delta^2 s/delta s - ...]; lambda-degree 1.
// The theta closed forms provide the independent second construction.
inline GradedSeries gdh_u(int i, long order_q, GdhUMode mode = GdhUMode::from_s) {
  if (i < 1 || i > 3) throw series_error("gdh_u: index must be 1, 2 or 3");
  switch (mode) {
    case GdhUMode::from_s: {
      LaurentSeries s = s_fn(order_q + 1);
      LaurentSeries one = LaurentSeries::constant(Rational(1));
      LaurentSeries ds = delta(s);
      LaurentSeries core = div(delta(ds), ds);  // delta^2 s / delta s
      LaurentSeries body;
      switch (i) {
        case 1: body = core - div(ds, s); break;
        case 2: body = core - div(ds, s - one); break;
        case 3: body = core - div(ds, s) - div(ds, s - one); break;
      }
      return GradedSeries(1, (Rational(-1) * body).truncated_to(24 * order_q));
    }
    case GdhUMode::from_theta: {
      long inner = order_q + 2;
      LaurentSeries t3_4 = int_pow(theta(3, inner), 4);
      LaurentSeries t4_4 = int_pow(theta(4, inner), 4);
      LaurentSeries sum34 = t3_4 + t4_4;
      LaurentSeries body;
      switch (i) {
        case 1: body = dlog(mul(t3_4, t4_4)) - dlog(sum34); break;
        case 2: body = dlog(sum34); break;
        case 3: body = dlog(int_pow(theta(2, inner), 8)) - dlog(sum34); break;
      }
      return GradedSeries(1, (Rational(-1) * body).truncated_to(24 * order_q));
    }
  }
  throw series_error("gdh_u: unknown mode");
}

// Theta-logarithm solutions of the paired-sum Halphen system
//   u1' + u2' = u1 u2,  u2' + u3' = u2 u3,  u3' + u1' = u3 u1,
// namely u1 = (ln theta4^4)', u2 = (ln theta2^4)', u3 = (ln theta3^4)'.
// As a graded series: lambda * 8 * dlog(theta); the sum u1+u2+u3 equals
// lambda*E_2 and solves the Chazy equation.
inline GradedSeries dh_u(int i, long order_q) {
  if (i < 1 || i > 3) throw series_error("dh_u: index must be 1, 2 or 3");
  static constexpr int kThetaIndex[4] = {0, 4, 2, 3};
  LaurentSeries th = theta(kThetaIndex[i], order_q + 1);
  return GradedSeries(1, (Rational(8) * dlog(th)).truncated_to(24 * order_q));
}

// Catalog metadata: weight/group classification and the available
// construction modes. Documentation only; nothing computes with it.
struct FormDescriptor {
  std::string name;
  std::string weight;  // "4", "quasi-2", "0", "1/2"
  std::string group;   // "SL2Z", "Gamma0_2", "Gamma_2"
  std::vector<std::string> constructions;
};

inline const std::vector<FormDescriptor>& catalog_descriptors() {
  static const std::vector<FormDescriptor> k = {
      {"E2", "quasi-2", "SL2Z", {"divisor_sum"}},
      {"E4", "4", "SL2Z", {"divisor_sum"}},
      {"E6", "6", "SL2Z", {"divisor_sum"}},
      {"E8", "8", "SL2Z", {"divisor_sum"}},
      {"P", "quasi-2", "SL2Z", {"divisor_sum"}},
      {"Q", "4", "SL2Z", {"divisor_sum"}},
      {"R", "6", "SL2Z", {"divisor_sum"}},
      {"Ecal2", "quasi-2", "Gamma0_2", {"lambert", "level1_combination"}},
      {"Ecal4", "4", "Gamma0_2", {"lambert"}},
      {"Et2", "2", "Gamma0_2", {"lambert", "odd_divisor", "level1_combination"}},
      {"Pcal", "quasi-2", "Gamma0_2", {"lambert"}},
      {"Ptilde", "2", "Gamma0_2", {"lambert", "odd_divisor", "level1_combination"}},
      {"Qcal", "4", "Gamma0_2", {"lambert"}},
      {"Delta", "12", "SL2Z", {"eisenstein", "product"}},
      {"Dcal", "4", "Gamma0_2", {"eisenstein"}},
      {"j", "0", "SL2Z", {"eisenstein_quotient"}},
      {"j2", "0", "Gamma0_2", {"eisenstein_quotient"}},
      {"theta2", "1/2", "Gamma_2", {"sum"}},
      {"theta3", "1/2", "Gamma_2", {"sum"}},
      {"theta4", "1/2", "Gamma_2", {"sum"}},
      {"eta", "1/2", "SL2Z", {"product"}},
      {"lambda", "0", "Gamma_2", {"theta_quotient"}},
      {"s", "0", "Gamma0_2", {"j2_quarter", "delta_quotient", "theta_quotient"}},
      {"u1", "quasi-2", "Gamma0_2", {"from_s", "from_theta"}},
      {"u2", "quasi-2", "Gamma0_2", {"from_s", "from_theta"}},
      {"u3", "quasi-2", "Gamma0_2", {"from_s", "from_theta"}},
      {"v1", "quasi-2", "Gamma_2", {"theta_log"}},
      {"v2", "quasi-2", "Gamma_2", {"theta_log"}},
      {"v3", "quasi-2", "Gamma_2", {"theta_log"}},
  };
  return k;
}

}  // namespace modforms2
