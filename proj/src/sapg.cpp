#include "spamri/sapg.hpp"

#include <algorithm>
#include <cmath>

#include "spamri/errors.hpp"

namespace spamri {

void SapgConfig::validate() const {
  if (!(tau_min > 0.0 && tau_min < tau_max)) {
    throw ConfigError("sapg bounds must satisfy 0 < tau_min < tau_max");
  }
  if (!(delta0 > 0.0)) throw ConfigError("sapg delta0 must be positive");
  if (!(decay > 0.6 && decay <= 0.9)) throw ConfigError("sapg decay must lie in (0.6, 0.9]");
  if (dim < 0.0) throw ConfigError("sapg dim must be non-negative (0 selects the pixel count)");
}

double SapgConfig::resolved_dim(std::size_t pixels) const {
  return dim > 0.0 ? dim : static_cast<double>(pixels);
}

double sapg_step(std::size_t t, double dim, const SapgConfig& cfg) {
  if (t < 1) throw ConfigError("sapg iteration index starts at 1");
  return cfg.delta0 / (dim * std::pow(static_cast<double>(t), cfg.decay));
}

double update_tau(double tau, double tv_x, std::size_t t, double dim, const SapgConfig& cfg) {
  if (!(tv_x >= 0.0)) throw NumericalError("sapg received a negative or non-finite TV value");
  const double next = tau + sapg_step(t, dim, cfg) * (dim / tau - tv_x);
  return std::clamp(next, cfg.tau_min, cfg.tau_max);
}

}  // namespace spamri
