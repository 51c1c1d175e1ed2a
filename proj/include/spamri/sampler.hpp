#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spamri/forward_model.hpp"
#include "spamri/rng.hpp"
#include "spamri/sapg.hpp"
#include "spamri/tv_prox.hpp"

namespace spamri {

/// Per-coil vectors over the kept k-space locations (the shape of c and h2).
using CompactStack = std::vector<std::vector<Complex>>;

struct SamplerConfig {
  double rho = 0.005;    ///< coupling std of the splitting terms
  double alpha = 0.005;  ///< std of the auxiliary variables h1..h4
  /// Noise std per real/imaginary component; 0 takes it from the k-space data.
  double sigma = 0.0;
  /// Moreau-Yosida envelope parameter; 0 means rho^2.
  double lambda = 0.0;
  /// Langevin step; 0 means rho^2 / 4.
  double gamma = 0.0;
  std::size_t n_mc = 2000;
  std::size_t n_bi = 1700;
  std::uint64_t seed = 0;
  /// Starting tau; 0 means dim / TV(x0) for the initial image x0, clamped to
  /// the SAPG bounds.
  double tau_init = 0.0;
  /// Skip the SAPG updates and keep tau at tau_init for the whole chain.
  bool fix_tau = false;
  TvConfig tv{};
  SapgConfig sapg{};

  double resolved_lambda() const { return lambda > 0.0 ? lambda : rho * rho; }
  double resolved_gamma() const { return gamma > 0.0 ? gamma : rho * rho / 4.0; }
  double resolved_sigma(const KSpaceData& y) const { return sigma > 0.0 ? sigma : y.sigma; }
  void validate(const KSpaceData& y) const;
};

/// The inputs the chain conditions on.
struct Problem {
  KSpaceData y;
  CoilSensitivities coils;
  SamplingMask mask;

  Problem(KSpaceData data, CoilSensitivities c, SamplingMask m);
  std::size_t height() const { return mask.height(); }
  std::size_t width() const { return mask.width(); }
};

/// Every variable of the augmented model at one iteration.
struct ChainState {
  ImageGrid x;
  ImageGrid b;
  CompactStack c;
  CoilStack d;
  CoilStack e;
  ImageGrid h1;
  CompactStack h2;
  CoilStack h3;
  CoilStack h4;
  double tau = 1.0;

  bool all_finite() const;
};

struct DiagnosticsRow {
  std::size_t iteration = 0;
  double tau = 0.0;
  double tv_x = 0.0;
  double misfit = 0.0;
};

struct ReconResult {
  ImageGrid mmse;
  ImageGrid std_map;
  /// tau after each burn-in iteration.
  std::vector<double> tau_trace;
  std::size_t n_used = 0;
  std::vector<DiagnosticsRow> diagnostics;
};

/// Streaming per-pixel mean and (population) variance, Welford's update.
class RunningMoments {
 public:
  RunningMoments(std::size_t height, std::size_t width)
      : mean_(height, width), m2_(height, width) {}

  void add(const ImageGrid& sample);
  std::size_t count() const { return n_; }
  const ImageGrid& mean() const { return mean_; }
  ImageGrid variance() const;
  ImageGrid std_dev() const;

 private:
  std::size_t n_ = 0;
  ImageGrid mean_;
  ImageGrid m2_;
};

/// Starting point: x from the zero-filled coil-combined inverse transform,
/// every split variable equal to its constraint, every h zero.
/// tau follows SamplerConfig::tau_init.
ChainState initial_state(const Problem& problem, const SamplerConfig& cfg);
/// Same, around a caller-provided starting image.
ChainState initial_state(const Problem& problem, const SamplerConfig& cfg, const ImageGrid& x0);

// Conditional draws. A complex Gaussian with variance v has independent real
// and imaginary parts, each with variance v.
ImageGrid sample_x(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng);
ImageGrid sample_b(const ChainState& s, const SamplerConfig& cfg, Rng& rng);
/// The P-MYULA map without its noise term.
ImageGrid myula_drift(const ChainState& s, const SamplerConfig& cfg);
CompactStack sample_c(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng);
CoilStack sample_d(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng);
CoilStack sample_e(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng);

struct AuxiliaryDraw {
  ImageGrid h1;
  CompactStack h2;
  CoilStack h3;
  CoilStack h4;
};
AuxiliaryDraw sample_h(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng);

/// One Gibbs sweep x -> b -> c -> d -> e -> h1..h4 at the state's tau.
void gibbs_sweep(ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng);

using DiagnosticsSink = std::function<void(const DiagnosticsRow&)>;

/// Burn-in sweeps with a SAPG tau update after each, then n_mc - n_bi sweeps
/// at frozen tau whose x samples feed the MMSE and marginal std estimates.
ReconResult run_chain(const Problem& problem, const SamplerConfig& cfg,
                      const DiagnosticsSink& sink = {});

/// Same, starting from a caller-provided state.
ReconResult run_chain(const Problem& problem, const SamplerConfig& cfg, ChainState state,
                      const DiagnosticsSink& sink = {});

}  // namespace spamri
