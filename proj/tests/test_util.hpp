#pragma once

#include <random>

#include "modforms2/series.hpp"

namespace mf2test {

// Deterministic random truncated Laurent series for the property suites.
struct SeriesGen {
  std::mt19937 rng;

  explicit SeriesGen(unsigned seed) : rng(seed) {}

  modforms2::Rational rational() {
    std::uniform_int_distribution<long> num(-12, 12);
    std::uniform_int_distribution<long> den(1, 9);
    return modforms2::make_rational(num(rng), den(rng));
  }

  // Random series with valuation in [-48, 48) and 1/24-grid support.
  modforms2::LaurentSeries series(long precision24 = 240, bool invertible = false) {
    std::uniform_int_distribution<long> val(-48, 47);
    std::uniform_int_distribution<int> nterms(1, 14);
    std::uniform_int_distribution<long> gap(1, 30);
    long v = val(rng);
    modforms2::LaurentSeries::TermMap t;
    long e = v;
    int n = nterms(rng);
    for (int k = 0; k < n && e < precision24; ++k) {
      modforms2::Rational c = rational();
      if (k == 0 && invertible && c == 0) c = modforms2::Rational(1);
      if (c != 0) t.emplace(e, c);
      e += gap(rng);
    }
    if (invertible && (t.empty() || t.begin()->first != v || t.begin()->second == 0))
      t[v] = modforms2::Rational(1);
    return modforms2::LaurentSeries::from_terms(std::move(t), precision24);
  }
};

}  // namespace mf2test
