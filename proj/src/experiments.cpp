#include "spamri/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "spamri/io.hpp"

namespace spamri {

PhantomKind parse_phantom_kind(const std::string& s) {
  if (s == "shepp-logan") return PhantomKind::shepp_logan;
  if (s == "blocks") return PhantomKind::blocks;
  throw ConfigError("unknown phantom kind '" + s + "' (expected shepp-logan | blocks)");
}

CoilKind parse_coil_kind(const std::string& s) {
  if (s == "ones") return CoilKind::ones;
  if (s == "gaussian-lobes") return CoilKind::gaussian_lobes;
  throw ConfigError("unknown coil kind '" + s + "' (expected ones | gaussian-lobes)");
}

MaskScheme parse_mask_scheme(const std::string& s) {
  if (s == "uniform-random") return MaskScheme::uniform_random;
  if (s == "variable-density-random") return MaskScheme::variable_density;
  throw ConfigError("unknown mask scheme '" + s +
                    "' (expected uniform-random | variable-density-random)");
}

Method parse_method(const std::string& s) {
  if (s == "ifft") return Method::ifft;
  if (s == "admm-tv") return Method::admm_tv;
  if (s == "admm-wav") return Method::admm_wav;
  if (s == "mcmc-tv") return Method::mcmc_tv;
  throw ConfigError("unknown method '" + s + "' (expected mcmc-tv | admm-tv | admm-wav | ifft)");
}

std::string to_string(PhantomKind k) {
  return k == PhantomKind::shepp_logan ? "shepp-logan" : "blocks";
}
std::string to_string(CoilKind k) { return k == CoilKind::ones ? "ones" : "gaussian-lobes"; }
std::string to_string(MaskScheme s) {
  return s == MaskScheme::uniform_random ? "uniform-random" : "variable-density-random";
}
std::string to_string(Method m) {
  switch (m) {
    case Method::ifft: return "ifft";
    case Method::admm_tv: return "admm-tv";
    case Method::admm_wav: return "admm-wav";
    case Method::mcmc_tv: return "mcmc-tv";
  }
  return "unknown";
}

namespace {

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan (Toft's higher-contrast intensities).
constexpr Ellipse kSheppLogan[] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},        {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},       {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},     {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},   {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
};

ImageGrid shepp_logan(std::size_t h, std::size_t w) {
  ImageGrid img(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double x = (static_cast<double>(c) - (static_cast<double>(w) - 1.0) / 2.0) /
                       (static_cast<double>(w) / 2.0);
      const double y = ((static_cast<double>(h) - 1.0) / 2.0 - static_cast<double>(r)) /
                       (static_cast<double>(h) / 2.0);
      double v = 0.0;
      for (const Ellipse& e : kSheppLogan) {
        const double t = e.phi_deg * std::numbers::pi / 180.0;
        const double xr = (x - e.x0) * std::cos(t) + (y - e.y0) * std::sin(t);
        const double yr = -(x - e.x0) * std::sin(t) + (y - e.y0) * std::cos(t);
        if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0) v += e.intensity;
      }
      img(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

// Three disjoint rectangles that touch neither each other nor the border.
ImageGrid blocks(std::size_t h, std::size_t w) {
  struct Block {
    std::size_t r0, r1, c0, c1;
    double v;
  };
  const Block bs[] = {
      {2 * h / 16, 6 * h / 16, 2 * w / 16, 7 * w / 16, 0.8},
      {9 * h / 16, 14 * h / 16, 3 * w / 16, 9 * w / 16, 0.5},
      {3 * h / 16, 12 * h / 16, 10 * w / 16, 14 * w / 16, 1.0},
  };
  ImageGrid img(h, w);
  for (const Block& b : bs) {
    for (std::size_t r = b.r0; r < b.r1; ++r) {
      for (std::size_t c = b.c0; c < b.c1; ++c) img(r, c) = b.v;
    }
  }
  return img;
}

// Signed frequency index of DFT bin k on an axis of length n.
long signed_freq(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace

ImageGrid make_phantom(PhantomKind kind, std::size_t height, std::size_t width) {
  if (height < 16 || width < 16) throw ConfigError("phantom size must be at least 16x16");
  return kind == PhantomKind::shepp_logan ? shepp_logan(height, width) : blocks(height, width);
}

CoilSensitivities make_coils(std::size_t coils, std::size_t height, std::size_t width,
                             CoilKind kind) {
  if (coils < 1) throw ConfigError("coil count must be at least 1");
  std::vector<ComplexGrid> maps;
  if (kind == CoilKind::ones) {
    for (std::size_t l = 0; l < coils; ++l) maps.emplace_back(height, width, Complex(1.0, 0.0));
    return CoilSensitivities(std::move(maps));
  }
  const double cy = (static_cast<double>(height) - 1.0) / 2.0;
  const double cx = (static_cast<double>(width) - 1.0) / 2.0;
  const double extent = static_cast<double>(std::min(height, width));
  const double radius = 0.45 * extent;
  const double spread = 0.35 * extent;
  for (std::size_t l = 0; l < coils; ++l) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(coils);
    const double ly = cy + radius * std::sin(theta);
    const double lx = cx + radius * std::cos(theta);
    ComplexGrid m(height, width);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double dy = static_cast<double>(r) - ly;
        const double dx = static_cast<double>(c) - lx;
        const double amp = std::exp(-(dx * dx + dy * dy) / (2.0 * spread * spread));
        const double phase = theta + std::numbers::pi * (dx * std::cos(theta) + dy * std::sin(theta)) /
                                         (2.0 * extent);
        m(r, c) = std::polar(amp, phase);
      }
    }
    maps.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < height * width; ++i) {
    double ss = 0.0;
    for (const auto& m : maps) ss += std::norm(m[i]);
    const double inv = 1.0 / std::sqrt(ss);
    for (auto& m : maps) m[i] *= inv;
  }
  return CoilSensitivities(std::move(maps));
}

void MaskSpec::validate() const {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ConfigError("sampling ratio must lie in (0, 1]");
  if (!(center_fraction >= 0.0 && center_fraction < ratio)) {
    throw ConfigError("center_fraction must satisfy 0 <= center_fraction < ratio");
  }
}

SamplingMask make_mask(const MaskSpec& spec, std::size_t height, std::size_t width) {
  spec.validate();
  const std::size_t n = height * width;
  const auto target = static_cast<std::size_t>(std::llround(spec.ratio * static_cast<double>(n)));
  std::vector<std::uint8_t> keep(n, 0);

  std::size_t ch = 1, cw = 1;
  if (spec.scheme == MaskScheme::variable_density) {
    const double side = std::sqrt(spec.center_fraction);
    ch = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(side * static_cast<double>(height))));
    cw = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(side * static_cast<double>(width))));
  }
  const long rlo = -static_cast<long>(ch / 2), rhi = static_cast<long>(ch - ch / 2);
  const long clo = -static_cast<long>(cw / 2), chi = static_cast<long>(cw - cw / 2);
  std::size_t kept = 0;
  for (std::size_t r = 0; r < height; ++r) {
    const long fr = signed_freq(r, height);
    if (fr < rlo || fr >= rhi) continue;
    for (std::size_t c = 0; c < width; ++c) {
      const long fc = signed_freq(c, width);
      if (fc < clo || fc >= chi) continue;
      keep[r * width + c] = 1;
      ++kept;
    }
  }
  if (kept > target) {
    throw ConfigError("sampling ratio is smaller than the fully sampled center region");
  }

  std::vector<std::size_t> pool;
  pool.reserve(n - kept);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i] == 0) pool.push_back(i);
  }
  Rng rng(spec.seed);
  const std::size_t extra = target - kept;
  for (std::size_t k = 0; k < extra; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.uniform_index(pool.size() - k));
    std::swap(pool[k], pool[j]);
    keep[pool[k]] = 1;
  }
  return SamplingMask(height, width, std::move(keep));
}

double sigma_for_snr(const ImageGrid& x, const CoilSensitivities& coils, double snr_db) {
  const CoilStack k = dft2(apply_phi(x, coils));
  double power = 0.0;
  std::size_t count = 0;
  for (const auto& plane : k) {
    for (const Complex& v : plane.values()) power += std::norm(v);
    count += plane.size();
  }
  power /= static_cast<double>(count);
  return std::sqrt(power / (2.0 * std::pow(10.0, snr_db / 10.0)));
}

CellSeeds cell_seeds(std::uint64_t seed) {
  return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3)};
}

double BenchmarkReport::mean_rmse(Method m, double ratio) const {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.method == m && r.ratio == ratio) {
      s += r.rmse;
      ++n;
    }
  }
  if (n == 0) throw ConfigError("no report rows for " + to_string(m));
  return s / static_cast<double>(n);
}

double BenchmarkReport::mean_cc(Method m, double ratio) const {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.method == m && r.ratio == ratio && r.cc) {
      s += *r.cc;
      ++n;
    }
  }
  if (n == 0) throw ConfigError("no correlation values for " + to_string(m));
  return s / static_cast<double>(n);
}

std::string BenchmarkReport::to_csv(bool with_timing) const {
  std::ostringstream out;
  out << "method,ratio,seed,rmse,cc,runtime_s\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << io::format_double(r.ratio) << ',' << r.seed << ','
        << io::format_double(r.rmse) << ',' << (r.cc ? io::format_double(*r.cc) : "") << ','
        << (with_timing ? io::format_double(r.runtime_s) : "") << '\n';
  }
  return out.str();
}

namespace {

std::string cell_dir_name(double ratio, std::uint64_t seed) {
  std::ostringstream s;
  s << "r" << std::llround(ratio * 1000.0) << "_s" << seed;
  return s.str();
}

std::vector<BenchmarkRow> run_cell(const BenchmarkPlan& plan, const ImageGrid& truth,
                                   const CoilSensitivities& coils, double sigma, double ratio,
                                   std::uint64_t seed) {
  const CellSeeds seeds = cell_seeds(seed);
  MaskSpec ms{plan.scheme, ratio, plan.center_fraction, seeds.mask};
  SamplingMask mask = make_mask(ms, plan.height, plan.width);
  KSpaceData y = simulate(truth, coils, mask, sigma, seeds.noise);

  std::filesystem::path dir;
  if (!plan.out_dir.empty()) {
    dir = std::filesystem::path(plan.out_dir) / cell_dir_name(ratio, seed);
    std::filesystem::create_directories(dir);
  }

  std::vector<BenchmarkRow> rows;
  for (Method m : plan.methods) {
    BenchmarkRow row;
    row.method = m;
    row.ratio = ratio;
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    ImageGrid x;
    std::optional<ImageGrid> std_map;
    switch (m) {
      case Method::ifft:
        x = ifft_recon(y, coils, mask);
        break;
      case Method::admm_tv:
      case Method::admm_wav: {
        AdmmConfig cfg = plan.admm;
        cfg.prior = m == Method::admm_tv ? AdmmPrior::tv : AdmmPrior::haar;
        if (plan.reg_weight_grid.empty()) {
          x = admm_recon(y, coils, mask, cfg);
          row.weight = cfg.reg_weight;
        } else {
          WeightSearch ws = select_reg_weight(y, coils, mask, truth, cfg, plan.reg_weight_grid);
          x = std::move(ws.best_x);
          row.weight = ws.best_weight;
        }
        break;
      }
      case Method::mcmc_tv: {
        SamplerConfig cfg = plan.sampler;
        cfg.seed = seeds.chain;
        Problem problem(y, coils, mask);
        ReconResult res = run_chain(problem, cfg);
        x = std::move(res.mmse);
        std_map = std::move(res.std_map);
        row.weight = res.tau_trace.empty() ? cfg.tau_init : res.tau_trace.back();
        break;
      }
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.rmse = rmse(x, truth);
    const ImageGrid err = abs_error(x, truth);
    if (std_map) row.cc = corrcoef(*std_map, err);
    if (!dir.empty()) {
      const std::string name = to_string(m);
      io::write_image(dir / (name + "_recon.f64"), x);
      io::write_pgm(dir / (name + "_recon.pgm"), x);
      io::write_image(dir / (name + "_error.f64"), err);
      io::write_pgm(dir / (name + "_error.pgm"), err);
      if (std_map) {
        io::write_image(dir / (name + "_std.f64"), *std_map);
        io::write_pgm(dir / (name + "_std.pgm"), *std_map);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkPlan& plan) {
  if (plan.ratios.empty() || plan.seeds.empty() || plan.methods.empty()) {
    throw ConfigError("benchmark plan needs at least one ratio, seed and method");
  }
  const ImageGrid truth = make_phantom(plan.phantom, plan.height, plan.width);
  const CoilSensitivities coils = make_coils(plan.coils, plan.height, plan.width, plan.coil_kind);
  const double sigma = sigma_for_snr(truth, coils, plan.snr_db);
  if (!plan.out_dir.empty()) {
    std::filesystem::create_directories(plan.out_dir);
    io::write_image(std::filesystem::path(plan.out_dir) / "truth.f64", truth);
    io::write_pgm(std::filesystem::path(plan.out_dir) / "truth.pgm", truth);
  }

  struct Cell {
    double ratio;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double r : plan.ratios) {
    for (std::uint64_t s : plan.seeds) cells.push_back({r, s});
  }
  std::vector<std::vector<BenchmarkRow>> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = run_cell(plan, truth, coils, sigma, cells[i].ratio, cells[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(plan.threads, cells.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Rows ordered by method (plan order), then ratio, then seed.
  BenchmarkReport report;
  for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
    for (const auto& cell_rows : results) report.rows.push_back(cell_rows[mi]);
  }
  return report;
}

}  // namespace spamri
