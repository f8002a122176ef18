// Prints a few of the catalog expansions in readable form.

#include <iostream>

#include "modforms2/catalog.hpp"

using namespace modforms2;

int main() {
  std::cout << "E2     = " << pretty_q_expansion(eisenstein_level1(2, 6), 5) << "\n";
  std::cout << "Ecal2  = " << pretty_q_expansion(eisenstein_level2(2, 6), 5) << "\n";
  std::cout << "Et2    = " << pretty_q_expansion(e_tilde_2(6), 5) << "\n";
  std::cout << "Dcal   = " << pretty_q_expansion(d_cal(6), 5) << "\n";
  std::cout << "Delta  = " << pretty_q_expansion(delta_fn(6), 5) << "\n";
  std::cout << "j      = " << pretty_q_expansion(j_fn(4), 4) << "\n";
  std::cout << "j2     = " << pretty_q_expansion(j2_fn(4), 4) << "\n";
  std::cout << "lambda = " << pretty_q_expansion(lambda_fn(3), 4) << "\n";
  std::cout << "eta    = " << pretty_q_expansion(eta(8), 4) << "\n";
  return 0;
}
