#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spamri/baselines.hpp"
#include "spamri/forward_model.hpp"
#include "spamri/metrics.hpp"
#include "spamri/sampler.hpp"

namespace spamri {

enum class PhantomKind { shepp_logan, blocks };
enum class CoilKind { ones, gaussian_lobes };
enum class MaskScheme { uniform_random, variable_density };
enum class Method { ifft, admm_tv, admm_wav, mcmc_tv };

PhantomKind parse_phantom_kind(const std::string& s);
CoilKind parse_coil_kind(const std::string& s);
MaskScheme parse_mask_scheme(const std::string& s);
Method parse_method(const std::string& s);
std::string to_string(PhantomKind k);
std::string to_string(CoilKind k);
std::string to_string(MaskScheme s);
std::string to_string(Method m);

/// Deterministic piecewise-constant test image with values in [0, 1].
/// Both dimensions must be at least 16.
ImageGrid make_phantom(PhantomKind kind, std::size_t height, std::size_t width);

/// `ones` gives L identical unit maps; `gaussian_lobes` places L smooth
/// complex lobes around the field of view, normalised so that
/// sum_l |phi_l|^2 = 1 at every pixel.
CoilSensitivities make_coils(std::size_t coils, std::size_t height, std::size_t width, CoilKind kind);

struct MaskSpec {
  MaskScheme scheme = MaskScheme::variable_density;
  double ratio = 0.3;
  /// Fraction of the grid covered by the fully sampled low-frequency block.
  double center_fraction = 0.04;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Keeps exactly round(ratio * H * W) locations, DC included. Variable
/// density fully samples the central low-frequency block (wrapped around DC
/// in DFT layout) and spreads the rest uniformly at random outside it.
SamplingMask make_mask(const MaskSpec& spec, std::size_t height, std::size_t width);

/// Per-component noise std giving the requested SNR (dB) against the mean
/// power of the fully sampled coil k-space of x.
double sigma_for_snr(const ImageGrid& x, const CoilSensitivities& coils, double snr_db);

struct BenchmarkPlan {
  PhantomKind phantom = PhantomKind::shepp_logan;
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t coils = 1;
  CoilKind coil_kind = CoilKind::ones;
  double snr_db = 30.0;
  MaskScheme scheme = MaskScheme::variable_density;
  double center_fraction = 0.04;
  std::vector<double> ratios{0.05, 0.10, 0.20, 0.30, 0.40};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<Method> methods{Method::ifft, Method::admm_wav, Method::admm_tv, Method::mcmc_tv};
  SamplerConfig sampler{};
  AdmmConfig admm{};
  /// Weights searched for the ADMM baselines; empty means use admm.reg_weight.
  std::vector<double> reg_weight_grid = default_reg_weight_grid();
  unsigned threads = 1;
  /// When non-empty, per-cell reconstructions, error and std maps go here.
  std::string out_dir;
};

struct BenchmarkRow {
  Method method = Method::ifft;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  /// Correlation of the std map with |error|; only for sampling methods.
  std::optional<double> cc;
  double runtime_s = 0.0;
  /// Regularisation weight actually used (tau at the end of burn-in for MCMC).
  std::optional<double> weight;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  /// Mean RMSE over seeds for one (method, ratio) cell.
  double mean_rmse(Method m, double ratio) const;
  /// Mean CC over seeds for one (method, ratio) cell.
  double mean_cc(Method m, double ratio) const;
  /// CSV with header method,ratio,seed,rmse,cc,runtime_s. Timings are left
  /// blank unless `with_timing`, so the default output is byte-reproducible.
  std::string to_csv(bool with_timing = false) const;
};

/// Seeds of the independent random streams of one benchmark cell.
struct CellSeeds {
  std::uint64_t mask;
  std::uint64_t noise;
  std::uint64_t chain;
};
CellSeeds cell_seeds(std::uint64_t seed);

BenchmarkReport run_benchmark(const BenchmarkPlan& plan);

}  // namespace spamri
