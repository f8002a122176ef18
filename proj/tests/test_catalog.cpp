#include <catch2/catch.hpp>

#include <vector>

#include "modforms2/catalog.hpp"

using namespace modforms2;

TEST_CASE("bernoulli numbers") {
  CHECK(bernoulli(2) == make_rational(1, 6));
  CHECK(bernoulli(4) == make_rational(-1, 30));
  CHECK(bernoulli(6) == make_rational(1, 42));
  CHECK(bernoulli(8) == make_rational(-1, 30));
  CHECK(bernoulli(12) == make_rational(-691, 2730));
  CHECK_THROWS_AS(bernoulli(3), series_error);
  CHECK_THROWS_AS(bernoulli(-2), series_error);
}

TEST_CASE("divisor sums") {
  CHECK(sigma(1, 6) == 12);
  CHECK(sigma(0, 12) == 6);
  CHECK(sigma(3, 4) == 73);
  CHECK_THROWS_AS(sigma(1, 0), series_error);

  // direct enumeration oracle up to 200
  for (long n = 1; n <= 200; ++n) {
    for (long k : {1L, 3L, 5L, 7L}) {
      Integer direct(0);
      for (long d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        Integer dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(k));
        direct += dk;
      }
      REQUIRE(sigma(k, n) == direct);
    }
  }
}

TEST_CASE("level-1 Eisenstein series") {
  LaurentSeries e2 = eisenstein_level1(2, 6);
  CHECK(e2.coeff_q(0) == 1);
  CHECK(e2.coeff_q(1) == -24);
  CHECK(e2.coeff_q(2) == -72);
  CHECK(e2.coeff_q(3) == -96);
  CHECK(e2.coeff_q(4) == -168);

  LaurentSeries e4 = eisenstein_level1(4, 4);
  CHECK(e4.coeff_q(1) == 240);
  CHECK(e4.coeff_q(2) == 2160);

  LaurentSeries e6 = eisenstein_level1(6, 4);
  CHECK(e6.coeff_q(1) == -504);
  CHECK(e6.coeff_q(2) == -16632);

  // divisor-sum oracle across the expansion
  LaurentSeries e2_long = eisenstein_level1(2, 201);
  for (long n = 1; n <= 200; ++n)
    REQUIRE(e2_long.coeff_q(n) == Rational(-24) * Rational(sigma(1, n)));

  CHECK_THROWS_AS(eisenstein_level1(3, 4), series_error);
}

TEST_CASE("level-2 Eisenstein series") {
  LaurentSeries p = eisenstein_level2(2, 6);
  CHECK(p.coeff_q(0) == 1);
  CHECK(p.coeff_q(1) == 8);
  CHECK(p.coeff_q(2) == -8);
  CHECK(p.coeff_q(3) == 32);
  CHECK(p.coeff_q(4) == -40);

  LaurentSeries q4 = eisenstein_level2(4, 6);
  CHECK(q4.coeff_q(1) == -16);
  CHECK(q4.coeff_q(2) == 112);
  CHECK(q4.coeff_q(3) == -448);
  CHECK(q4.coeff_q(4) == 1136);

  // signed divisor-sum oracle
  LaurentSeries p_long = eisenstein_level2(2, 201);
  for (long n = 1; n <= 200; ++n) {
    Integer acc(0);
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) acc += (d % 2 == 1) ? -d : d;
    REQUIRE(p_long.coeff_q(n) == Rational(-8) * Rational(acc));
  }

  // the level-1 combination (4 E2(2z) - E2(z))/3 agrees
  LaurentSeries e2 = eisenstein_level1(2, 32);
  LaurentSeries comb =
      div(Rational(4) * scale_arg(e2, 2).truncated_to(24 * 32) - e2,
          LaurentSeries::constant(Rational(3)));
  CHECK(eq_to_order(eisenstein_level2(2, 32), comb, 24 * 32).equal);
}

TEST_CASE("the three constructions of the odd-divisor weight-2 series agree") {
  long n = 48;
  LaurentSeries a = e_tilde_2(n, ETilde2Mode::lambert);
  LaurentSeries b = e_tilde_2(n, ETilde2Mode::odd_divisor);
  LaurentSeries c = e_tilde_2(n, ETilde2Mode::level1_combination);
  CHECK(eq_to_order(a, b, 24 * n).equal);
  CHECK(eq_to_order(a, c, 24 * n).equal);
  CHECK(a.coeff_q(1) == 24);
  CHECK(a.coeff_q(4) == 24);  // odd divisors of 4: just 1
  CHECK(a.coeff_q(5) == 144);
}

TEST_CASE("Delta: product vs Eisenstein construction, tau values") {
  LaurentSeries de = delta_fn(24, DeltaMode::eisenstein);
  LaurentSeries dp = delta_fn(24, DeltaMode::product);
  CHECK(eq_to_order(de, dp, 24 * 24).equal);
  CHECK(dp.coeff_q(0) == 0);
  CHECK(dp.coeff_q(1) == 1);
  CHECK(dp.coeff_q(2) == -24);
  CHECK(dp.coeff_q(3) == 252);
  CHECK(dp.coeff_q(4) == -1472);

  // integrality of all coefficients
  for (long n = 1; n < 24; ++n) CHECK(dp.coeff_q(n).get_den() == 1);
}

TEST_CASE("tau satisfies the power bound up to 200") {
  // |tau(n)| <= n^{11/2} sigma_0(n), squared to stay in integers; equality
  // holds only at n = 1 (tau(1) = 1), strict inequality from n = 2 on.
  LaurentSeries d = delta_fn(201, DeltaMode::product);
  for (long n = 1; n <= 200; ++n) {
    Integer tau = d.coeff_q(n).get_num();
    Integer n11;
    mpz_ui_pow_ui(n11.get_mpz_t(), static_cast<unsigned long>(n), 11);
    Integer bound = n11 * sigma(0, n) * sigma(0, n);
    if (n == 1)
      REQUIRE(tau * tau == bound);
    else
      REQUIRE(tau * tau < bound);
  }
}

TEST_CASE("the weight-4 level-2 form counts 8-tuples of triangular numbers") {
  LaurentSeries d = d_cal(30);
  CHECK(d.coeff_q(0) == 0);
  CHECK(d.coeff_q(1) == 1);
  CHECK(d.coeff_q(2) == 8);
  CHECK(d.coeff_q(3) == 28);
  CHECK(d.coeff_q(4) == 64);

  // brute-force tuple counter: representations of n as an ordered sum of 8
  // triangular numbers
  const int kMax = 25;
  std::vector<long> tri;
  for (long t = 0; t * (t + 1) / 2 <= kMax; ++t) tri.push_back(t * (t + 1) / 2);
  std::vector<long> count(kMax + 1, 0);
  count[0] = 1;
  for (int part = 0; part < 8; ++part) {
    std::vector<long> next(kMax + 1, 0);
    for (int n = 0; n <= kMax; ++n) {
      if (count[n] == 0) continue;
      for (long t : tri) {
        if (n + t > kMax) break;
        next[n + t] += count[n];
      }
    }
    count.swap(next);
  }
  for (int n = 0; n <= kMax; ++n) REQUIRE(d.coeff_q(n + 1) == count[n]);
}

TEST_CASE("j and j2 frozen expansions") {
  LaurentSeries j = j_fn(4);
  CHECK(j.valuation() == -24);
  CHECK(j.coeff_q(-1) == 1);
  CHECK(j.coeff_q(0) == 744);
  CHECK(j.coeff_q(1) == 196884);
  CHECK(j.coeff_q(2) == 21493760);

  LaurentSeries j2 = j2_fn(4);
  CHECK(j2.valuation() == -24);
  CHECK(j2.coeff_q(-1) == 1);
  CHECK(j2.coeff_q(0) == 40);
  CHECK(j2.coeff_q(1) == 276);
  CHECK(j2.coeff_q(2) == -2048);

  // j2 = 64 s in the quotient construction
  LaurentSeries s = s_fn(4, SFnMode::delta_quotient);
  CHECK(eq_to_order(j2, Rational(64) * s, 24 * 4).equal);
}

TEST_CASE("null theta constants") {
  LaurentSeries t3 = theta(3, 6);
  CHECK(t3.coeff(0) == 1);
  CHECK(t3.coeff(12) == 2);
  CHECK(t3.coeff(48) == 2);
  CHECK(t3.coeff(108) == 2);

  LaurentSeries t2 = theta(2, 6);
  CHECK(t2.valuation() == 3);
  CHECK(t2.coeff(3) == 2);
  CHECK(t2.coeff(3 + 24) == 2);
  CHECK(t2.coeff(3 + 72) == 2);

  // theta4(q) = theta3(-q): alternating signs on the half-odd exponents
  LaurentSeries t4 = theta(4, 6);
  for (const auto& [e, c] : t3.terms()) {
    bool odd_half = (e / 12) % 2 == 1;
    CHECK(t4.coeff(e) == (odd_half ? -c : c));
  }
  CHECK_THROWS_AS(theta(5, 4), series_error);
}

TEST_CASE("eta: pentagonal expansion and theta product") {
  LaurentSeries e = eta(40);
  CHECK(e.valuation() == 1);
  // Euler pentagonal pattern: exponents 1 + 24 * k(3k+-1)/2 with sign (-1)^k
  std::map<long, long> expect{{1, 1},   {25, -1},  {49, -1},  {121, 1},
                              {169, 1}, {289, -1}, {361, -1}, {529, 1}};
  for (auto [e24, c] : expect) CHECK(e.coeff(e24) == c);
  // everything else vanishes
  CHECK(e.terms().size() >= 8);
  for (const auto& [e24, c] : e.terms()) {
    CHECK((c == 1 || c == -1));
    long m = e24 - 1;
    CHECK(m % 24 == 0);
  }

  LaurentSeries e3 = int_pow(e, 3);
  LaurentSeries tprod = div(
      mul(mul(theta(2, 40), theta(3, 40)), theta(4, 40)), LaurentSeries::constant(Rational(2)));
  CHECK(eq_to_order(e3, tprod, std::min(e3.precision(), tprod.precision())).equal);

  LaurentSeries e24 = int_pow(e, 24);
  LaurentSeries dd = delta_fn(40, DeltaMode::product);
  CHECK(eq_to_order(e24, dd, std::min(e24.precision(), dd.precision())).equal);
}

TEST_CASE("the degree-2 hauptmodul lambda") {
  LaurentSeries l = lambda_fn(8);
  CHECK(l.valuation() == 12);
  CHECK(l.coeff(12) == 16);
  CHECK(l.coeff(24) == -128);
  CHECK(l.coeff(36) == 704);
  CHECK(l.coeff(48) == -3072);

  // (2/lambda - 1)^2 = s
  LaurentSeries two_over = div(LaurentSeries::constant(Rational(2)), l);
  LaurentSeries m = two_over - LaurentSeries::constant(Rational(1)).truncated_to(two_over.precision());
  LaurentSeries sq = mul(m, m);
  LaurentSeries s = s_fn(8);
  CHECK(eq_to_order(sq, s, std::min(sq.precision(), s.precision())).equal);
}

TEST_CASE("the three constructions of s agree") {
  long n = 24;
  LaurentSeries a = s_fn(n, SFnMode::j2_quarter);
  LaurentSeries b = s_fn(n, SFnMode::delta_quotient);
  LaurentSeries c = s_fn(n, SFnMode::theta_quotient);
  CHECK(eq_to_order(a, b, 24 * n).equal);
  CHECK(eq_to_order(a, c, 24 * n).equal);
  CHECK(a.coeff_q(-1) == make_rational(1, 64));
  CHECK(a.coeff_q(0) == make_rational(40, 64));
  CHECK(a.coeff_q(1) == make_rational(276, 64));
  CHECK(a.coeff_q(2) == -32);
}

TEST_CASE("gDH variables: both constructions agree") {
  for (int i = 1; i <= 3; ++i) {
    GradedSeries a = gdh_u(i, 24, GdhUMode::from_s);
    GradedSeries b = gdh_u(i, 24, GdhUMode::from_theta);
    REQUIRE(a.lambda_degree() == 1);
    REQUIRE(b.lambda_degree() == 1);
    CHECK(eq_to_order(a.body(), b.body(),
                      std::min(a.body().precision(), b.body().precision()))
              .equal);
  }
}

TEST_CASE("DH variables: theta-log solutions of the paired-sum system") {
  long n = 24;
  GradedSeries v1 = dh_u(1, n), v2 = dh_u(2, n), v3 = dh_u(3, n);
  // v2 comes from theta2 ~ q^{1/8}: leading coefficient 8 * 1/8 = 1
  CHECK(v2.body().coeff(0) == 1);
  // the sum is lambda E2
  GradedSeries sum = v1 + v2 + v3;
  LaurentSeries e2 = eisenstein_level1(2, n);
  CHECK(eq_to_order(sum.body(), e2, std::min(sum.body().precision(), e2.precision()))
            .equal);
  // paired-sum equations, delta form
  auto pair_check = [](const GradedSeries& a, const GradedSeries& b) {
    GradedSeries lhs = z_deriv(a) + z_deriv(b);
    GradedSeries rhs = a * b;
    REQUIRE(lhs.lambda_degree() == rhs.lambda_degree());
    CHECK(eq_to_order(lhs.body(), rhs.body(),
                      std::min(lhs.body().precision(), rhs.body().precision()))
              .equal);
  };
  pair_check(v1, v2);
  pair_check(v2, v3);
  pair_check(v3, v1);
}

TEST_CASE("constant terms across the catalog") {
  for (long k : {2L, 4L, 6L, 8L}) {
    CHECK(eisenstein_level1(k, 4).coeff_q(0) == 1);
    CHECK(eisenstein_level2(k, 4).coeff_q(0) == 1);
  }
  CHECK(e_tilde_2(4).coeff_q(0) == 1);
  CHECK(delta_fn(4).coeff_q(0) == 0);
  CHECK(d_cal(4).coeff_q(0) == 0);
}

TEST_CASE("catalog descriptors cover the environment names") {
  const auto& descs = catalog_descriptors();
  CHECK(descs.size() == 29);
  for (const auto& d : descs) {
    CHECK_FALSE(d.name.empty());
    CHECK((d.group == "SL2Z" || d.group == "Gamma0_2" || d.group == "Gamma_2"));
  }
}
