#pragma once

#include <vector>

#include "spamri/forward_model.hpp"
#include "spamri/tv_prox.hpp"

namespace spamri {

enum class AdmmPrior { tv, haar };

struct AdmmConfig {
  /// Weight of the regulariser against 0.5 * ||y - S F Phi x||^2.
  double reg_weight = 0.1;
  /// Augmented-Lagrangian penalty.
  double penalty = 1.0;
  int max_iters = 100;
  /// Stop once ||x_k - z_k|| / max(||x_k||, eps) falls below this.
  double tol = 1e-6;
  AdmmPrior prior = AdmmPrior::tv;
  /// Conjugate-gradient steps for each x-update (warm-started).
  int cg_iters = 10;
  TvConfig tv = precise_tv_config();

  void validate() const;
};

struct AdmmResult {
  ImageGrid x;
  std::vector<double> objective;
  int iterations = 0;
};

/// Zero-filled inverse transform with coil combination:
/// Re(Phi^H F^H S^T y) divided pixelwise by sum_l |phi_l|^2.
ImageGrid ifft_recon(const KSpaceData& y, const CoilSensitivities& coils, const SamplingMask& mask);

/// 0.5 * ||y - S F Phi x||^2 + reg_weight * R(x)
double admm_objective(const ImageGrid& x, const KSpaceData& y, const CoilSensitivities& coils,
                      const SamplingMask& mask, const AdmmConfig& cfg);

AdmmResult admm_solve(const KSpaceData& y, const CoilSensitivities& coils, const SamplingMask& mask,
                      const AdmmConfig& cfg);

ImageGrid admm_recon(const KSpaceData& y, const CoilSensitivities& coils, const SamplingMask& mask,
                     const AdmmConfig& cfg);

/// Single-level orthonormal 2-D Haar transform. Subbands are stored in
/// quadrants: approximation top-left, then horizontal, vertical and diagonal
/// details. Both dimensions must be even.
ImageGrid haar_forward(const ImageGrid& x);
ImageGrid haar_inverse(const ImageGrid& coeffs);

double soft_threshold(double v, double threshold);

/// Reg weights tried when a ground-truth image is available to pick one.
std::vector<double> default_reg_weight_grid();

struct WeightSearch {
  double best_weight = 0.0;
  double best_rmse = 0.0;
  ImageGrid best_x;
};

/// Runs admm_recon for each weight in `grid` and keeps the lowest-RMSE result.
WeightSearch select_reg_weight(const KSpaceData& y, const CoilSensitivities& coils,
                               const SamplingMask& mask, const ImageGrid& truth, AdmmConfig cfg,
                               const std::vector<double>& grid);

}  // namespace spamri
