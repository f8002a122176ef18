// Integrates the Chazy equation from exact-series initial data at z = i and
// compares the endpoint against the series evaluation.

#include <cstdio>

#include "modforms2/eval.hpp"
#include "modforms2/ode.hpp"

using namespace modforms2;

int main() {
  Environment env = make_environment(60);
  ODEField chazy = make_field(FieldKind::chazy);
  FieldSeries series = field_series(chazy, env);

  const Complex z0{0, 1}, z1{0.4, 0.8};
  State y0 = series.value_at(z0);
  std::printf("y(i)      = % .12f %+.12fi\n", y0[0].real(), y0[0].imag());

  auto res = rk_integrate(chazy, y0, z0, z1, 1e-11);
  State ref = series.value_at(z1);
  std::printf("integrated: % .12f %+.12fi   (%ld steps)\n", res.state[0].real(),
              res.state[0].imag(), res.steps);
  std::printf("series:     % .12f %+.12fi\n", ref[0].real(), ref[0].imag());
  std::printf("difference: %.3e\n", std::abs(res.state[0] - ref[0]));
  return 0;
}
