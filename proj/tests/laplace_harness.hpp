#pragma once

#include <cmath>

#include "spamri/rng.hpp"
#include "spamri/sapg.hpp"

namespace testing {

/// SAPG on the scalar toy where TV is replaced by sum |x_i| over n i.i.d.
/// Laplace draws with rate tau_star, refreshed at every iteration. Returns the
/// final iterate.
inline double laplace_sapg(double tau_star, double tau0, std::size_t n, std::size_t iters,
                           std::uint64_t seed) {
  spamri::SapgConfig cfg;
  spamri::Rng rng(seed);
  double tau = tau0;
  for (std::size_t t = 1; t <= iters; ++t) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += -std::log(1.0 - rng.uniform()) / tau_star;
    tau = spamri::update_tau(tau, l1, t, static_cast<double>(n), cfg);
  }
  return tau;
}

}  // namespace testing
