#pragma once

#include "spamri/grids.hpp"

namespace spamri {

enum class TvVariant { isotropic, anisotropic };

struct TvConfig {
  TvVariant variant = TvVariant::isotropic;
  int max_iters = 20;
  /// Stop once the largest dual update falls below this.
  double tol = 1e-5;
  /// Dual ascent step, in (0, 0.25].
  double step = 0.25;

  void validate() const;
};

/// Settings for the exact prox used by the deterministic baselines.
inline TvConfig precise_tv_config(TvVariant variant = TvVariant::isotropic) {
  return TvConfig{variant, 200, 1e-8, 0.25};
}

double tv_value(const ImageGrid& x, TvVariant variant = TvVariant::isotropic);

struct TvProxSolution {
  ImageGrid u;
  GradientField dual;
  int iterations = 0;
  bool converged = false;
};

/// Chambolle's projection algorithm for
///   argmin_u  weight * TV(u) + 0.5 * ||u - b||^2.
/// `warm_dual`, when given, seeds the dual field (it must be feasible).
TvProxSolution tv_prox_solve(const ImageGrid& b, double weight, const TvConfig& cfg,
                             const GradientField* warm_dual = nullptr);

ImageGrid tv_prox(const ImageGrid& b, double weight, const TvConfig& cfg);

/// weight * TV(u) + 0.5 * ||u - b||^2
double tv_prox_objective(const ImageGrid& u, const ImageGrid& b, double weight,
                         TvVariant variant);

/// Primal objective at u = b - weight*div(p) minus the dual objective at p.
double tv_duality_gap(const ImageGrid& b, const GradientField& dual, double weight,
                      TvVariant variant);

}  // namespace spamri
