#pragma once

#include <cstddef>

namespace spamri {

/// Stochastic approximation proximal gradient settings for the TV weight.
struct SapgConfig {
  double tau_min = 1e-4;
  double tau_max = 1e3;
  double delta0 = 10.0;
  /// Exponent of the step schedule delta0 / (dim * t^decay), in (0.6, 0.9].
  double decay = 0.8;
  /// Dimension factor; 0 means "number of image pixels".
  double dim = 0.0;

  void validate() const;
  /// The dimension factor to use for an image with `pixels` entries.
  double resolved_dim(std::size_t pixels) const;
};

/// delta0 / (dim * t^decay)
double sapg_step(std::size_t t, double dim, const SapgConfig& cfg);

/// One projected ascent step on the marginal likelihood of tau:
///   clamp(tau + delta_t * (dim/tau - tv_x), tau_min, tau_max).
double update_tau(double tau, double tv_x, std::size_t t, double dim, const SapgConfig& cfg);

}  // namespace spamri
