#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "spamri/experiments.hpp"
#include "spamri/metrics.hpp"
#include "support.hpp"

using namespace spamri;

TEST_CASE("enum names round trip") {
  for (PhantomKind k : {PhantomKind::shepp_logan, PhantomKind::blocks}) {
    CHECK(parse_phantom_kind(to_string(k)) == k);
  }
  for (CoilKind k : {CoilKind::ones, CoilKind::gaussian_lobes}) CHECK(parse_coil_kind(to_string(k)) == k);
  for (MaskScheme s : {MaskScheme::uniform_random, MaskScheme::variable_density}) {
    CHECK(parse_mask_scheme(to_string(s)) == s);
  }
  for (Method m : {Method::ifft, Method::admm_tv, Method::admm_wav, Method::mcmc_tv}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(to_string(Method::mcmc_tv) == "mcmc-tv");
  CHECK_THROWS_AS(parse_method("mcmc"), ConfigError);
  CHECK_THROWS_AS(parse_phantom_kind(""), ConfigError);
  CHECK_THROWS_AS(parse_coil_kind("lobes"), ConfigError);
  CHECK_THROWS_AS(parse_mask_scheme("random"), ConfigError);
}

TEST_CASE("phantoms") {
  for (PhantomKind k : {PhantomKind::shepp_logan, PhantomKind::blocks}) {
    const ImageGrid a = make_phantom(k, 64, 48);
    CHECK(a == make_phantom(k, 64, 48));
    double lo = 1e9, hi = -1e9;
    for (double v : a.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(hi > lo);
    // zero at the image border
    CHECK(a(0, 0) == 0.0);
    CHECK(a(63, 47) == 0.0);
  }
  CHECK_THROWS_AS(make_phantom(PhantomKind::blocks, 8, 64), ConfigError);
  CHECK_THROWS_AS(make_phantom(PhantomKind::shepp_logan, 64, 15), ConfigError);
}

TEST_CASE("blocks phantom has the total variation of its rectangle outlines") {
  // 64x64: rectangles of 16x20 (0.8), 20x24 (0.5) and 36x16 (1.0). Each
  // boundary pixel pair contributes the jump once; only the inner
  // bottom-right corner of each rectangle carries both a horizontal and a
  // vertical jump.
  const ImageGrid x = make_phantom(PhantomKind::blocks, 64, 64);
  const double aniso = 0.8 * 2 * (16 + 20) + 0.5 * 2 * (20 + 24) + 1.0 * 2 * (36 + 16);
  const double iso = aniso - (2.0 - std::sqrt(2.0)) * (0.8 + 0.5 + 1.0);
  CHECK(tv_value(x, TvVariant::anisotropic) == doctest::Approx(aniso).epsilon(1e-12));
  CHECK(tv_value(x, TvVariant::isotropic) == doctest::Approx(iso).epsilon(1e-12));
  std::size_t count08 = 0, count05 = 0, count1 = 0;
  for (double v : x.values()) {
    count08 += v == 0.8;
    count05 += v == 0.5;
    count1 += v == 1.0;
  }
  CHECK(count08 == 16 * 20);
  CHECK(count05 == 20 * 24);
  CHECK(count1 == 36 * 16);
}

TEST_CASE("Shepp-Logan phantom structure") {
  const ImageGrid x = make_phantom(PhantomKind::shepp_logan, 64, 64);
  // outer skull ring at full intensity, brain interior at 0.2
  CHECK(x(32, 10) == doctest::Approx(1.0));
  CHECK(x(32, 3) == 0.0);
  CHECK(x(40, 32) == doctest::Approx(0.2));
  // left-right mirror symmetry holds away from the tilted ventricles
  CHECK(x(10, 20) == x(10, 43));
}

TEST_CASE("coil maps") {
  const CoilSensitivities ones = make_coils(3, 16, 20, CoilKind::ones);
  CHECK(ones.count() == 3);
  for (double v : ones.sum_of_squares().values()) CHECK(v == 3.0);

  const CoilSensitivities lobes = make_coils(4, 32, 24, CoilKind::gaussian_lobes);
  CHECK(lobes.count() == 4);
  for (double v : lobes.sum_of_squares().values()) CHECK(std::abs(v - 1.0) < 1e-12);
  // distinct coils see the image differently
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      Complex inner = 0.0;
      double na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < lobes[a].size(); ++i) {
        inner += std::conj(lobes[a][i]) * lobes[b][i];
        na += std::norm(lobes[a][i]);
        nb += std::norm(lobes[b][i]);
      }
      CHECK(std::abs(inner) / std::sqrt(na * nb) < 0.99);
    }
  }
  CHECK(make_coils(1, 16, 16, CoilKind::gaussian_lobes).count() == 1);
  CHECK_THROWS_AS(make_coils(0, 16, 16, CoilKind::ones), ConfigError);
}

TEST_CASE("mask generation") {
  MaskSpec spec;
  spec.seed = 3;
  SUBCASE("exact count and fully sampled center") {
    const SamplingMask m = make_mask(spec, 8, 8);
    CHECK(m.count() == 19);
    // 2x2 center block wraps around DC
    for (std::size_t i : {0u, 7u, 56u, 63u}) CHECK(m.kept(i));
  }
  SUBCASE("center block on a larger grid") {
    spec.center_fraction = 0.09;
    const SamplingMask m = make_mask(spec, 20, 20);
    CHECK(m.count() == 120);
    // side round(0.3 * 20) = 6 covers signed frequencies -3..2
    for (long fr = -3; fr <= 2; ++fr) {
      for (long fc = -3; fc <= 2; ++fc) {
        CHECK(m.kept(static_cast<std::size_t>((fr + 20) % 20 * 20 + (fc + 20) % 20)));
      }
    }
  }
  SUBCASE("deterministic per seed") {
    CHECK(make_mask(spec, 16, 16).keep() == make_mask(spec, 16, 16).keep());
    MaskSpec other = spec;
    other.seed = 4;
    CHECK(make_mask(spec, 16, 16).keep() != make_mask(other, 16, 16).keep());
  }
  SUBCASE("uniform scheme keeps DC") {
    spec.scheme = MaskScheme::uniform_random;
    spec.ratio = 0.05;
    const SamplingMask m = make_mask(spec, 16, 16);
    CHECK(m.count() == 13);
    CHECK(m.kept(0));
  }
  SUBCASE("full ratio keeps everything") {
    spec.ratio = 1.0;
    CHECK(make_mask(spec, 12, 10).count() == 120);
  }
  SUBCASE("invalid specs") {
    spec.ratio = 0.05;
    CHECK_THROWS_WITH_AS(make_mask(spec, 8, 8),
                         "sampling ratio is smaller than the fully sampled center region",
                         ConfigError);
    spec.ratio = 0.0;
    CHECK_THROWS_AS(make_mask(spec, 8, 8), ConfigError);
    spec.ratio = 1.5;
    CHECK_THROWS_AS(make_mask(spec, 8, 8), ConfigError);
    spec.ratio = 0.3;
    spec.center_fraction = 0.3;
    CHECK_THROWS_AS(make_mask(spec, 8, 8), ConfigError);
  }
}

TEST_CASE("mask sizes follow the ratio on every seed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (double ratio : {0.05, 0.1, 0.2, 0.3, 0.4}) {
      const MaskSpec spec{MaskScheme::variable_density, ratio, 0.04, seed};
      const SamplingMask m = make_mask(spec, 64, 64);
      CHECK(m.count() == static_cast<std::size_t>(std::llround(ratio * 4096)));
      CHECK(m.kept(0));
    }
  }
}

TEST_CASE("noise level for a target SNR") {
  const ImageGrid x(16, 16, 1.0);
  const CoilSensitivities coils = make_coils(1, 16, 16, CoilKind::ones);
  // all energy sits at DC: |X(0)|^2 = 256, mean power 1
  CHECK(sigma_for_snr(x, coils, 0.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(sigma_for_snr(x, coils, 20.0) == doctest::Approx(std::sqrt(0.005)));
  // 30 dB on the phantom: measured SNR of the simulated noise
  const ImageGrid p = make_phantom(PhantomKind::shepp_logan, 64, 64);
  const CoilSensitivities big = make_coils(1, 64, 64, CoilKind::ones);
  const double sigma = sigma_for_snr(p, big, 30.0);
  const SamplingMask full = testing::full_mask(64, 64);
  const KSpaceData clean = forward(p, big, full);
  const KSpaceData noisy = simulate(p, big, full, sigma, 4);
  double signal = 0.0, noise = 0.0;
  for (std::size_t k = 0; k < full.count(); ++k) {
    signal += std::norm(clean.coils[0][k]);
    noise += std::norm(noisy.coils[0][k] - clean.coils[0][k]);
  }
  CHECK(10.0 * std::log10(signal / noise) == doctest::Approx(30.0).epsilon(0.01));
}

TEST_CASE("cell seeds are distinct and stable") {
  const CellSeeds a = cell_seeds(1);
  const CellSeeds b = cell_seeds(1);
  const CellSeeds c = cell_seeds(2);
  CHECK(a.mask == b.mask);
  CHECK(a.chain == b.chain);
  CHECK(a.mask != a.noise);
  CHECK(a.noise != a.chain);
  CHECK(a.mask != c.mask);
}

TEST_CASE("rmse") {
  const ImageGrid a(2, 2, 0.0);
  const ImageGrid b(2, 2, 2.5);
  CHECK(rmse(a, b) == doctest::Approx(2.5));
  CHECK(rmse(b, b) == 0.0);
  const ImageGrid c(2, 2, std::vector<double>{1, 2, 3, 4});
  CHECK(rmse(a, c) == doctest::Approx(std::sqrt(7.5)));
  CHECK_THROWS_AS(rmse(a, ImageGrid(2, 3)), ShapeError);
  Rng rng(81);
  for (int t = 0; t < 50; ++t) {
    const ImageGrid x = testing::random_image(rng, 5, 5);
    const ImageGrid y = testing::random_image(rng, 5, 5);
    const ImageGrid z = testing::random_image(rng, 5, 5);
    CHECK(rmse(x, z) <= rmse(x, y) + rmse(y, z) + 1e-12);
    CHECK(rmse(x, y) == doctest::Approx(rmse(y, x)));
  }
}

TEST_CASE("correlation coefficient") {
  Rng rng(82);
  const ImageGrid u = testing::random_image(rng, 6, 6);
  ImageGrid v(6, 6), w(6, 6);
  for (std::size_t i = 0; i < 36; ++i) {
    v[i] = 3.0 * u[i] + 2.0;
    w[i] = -0.5 * u[i] + 7.0;
  }
  CHECK(corrcoef(u, v) == doctest::Approx(1.0));
  CHECK(corrcoef(u, w) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(corrcoef(u, ImageGrid(6, 6, 1.0)), NumericalError);
  const ImageGrid x(2, 2, std::vector<double>{1, 2, 3, 4});
  const ImageGrid y(2, 2, std::vector<double>{2, 1, 4, 3});
  CHECK(corrcoef(x, y) == doctest::Approx(0.6));
  const ImageGrid z = testing::random_image(rng, 6, 6);
  const double r = corrcoef(u, z);
  CHECK(std::abs(r) <= 1.0);
  CHECK(corrcoef(z, u) == doctest::Approx(r));
  CHECK(corrcoef(v, z) == doctest::Approx(r));
}

TEST_CASE("absolute error map") {
  const ImageGrid a(2, 2, std::vector<double>{1, -2, 3, 0});
  const ImageGrid b(2, 2, std::vector<double>{0, 2, 3, -1});
  CHECK(abs_error(a, b) == ImageGrid(2, 2, std::vector<double>{1, 4, 0, 1}));
}

namespace {

BenchmarkPlan tiny_plan() {
  BenchmarkPlan plan;
  plan.height = 16;
  plan.width = 16;
  plan.ratios = {0.3, 0.5};
  plan.seeds = {1, 2};
  plan.reg_weight_grid = {0.01, 0.1};
  plan.admm.max_iters = 20;
  plan.sampler.n_mc = 40;
  plan.sampler.n_bi = 20;
  return plan;
}

}  // namespace

TEST_CASE("benchmark rows and report") {
  BenchmarkPlan plan = tiny_plan();
  const BenchmarkReport rep = run_benchmark(plan);
  REQUIRE(rep.rows.size() == 16);
  // method-major, then ratio, then seed
  CHECK(rep.rows[0].method == Method::ifft);
  CHECK(rep.rows[1].seed == 2);
  CHECK(rep.rows[2].ratio == 0.5);
  CHECK(rep.rows[4].method == Method::admm_wav);
  CHECK(rep.rows[15].method == Method::mcmc_tv);
  for (const auto& r : rep.rows) {
    CHECK(r.rmse > 0.0);
    CHECK(r.cc.has_value() == (r.method == Method::mcmc_tv));
    CHECK(r.weight.has_value() == (r.method != Method::ifft));
    CHECK(r.runtime_s >= 0.0);
  }
  CHECK(rep.mean_rmse(Method::ifft, 0.3) ==
        doctest::Approx(0.5 * (rep.rows[0].rmse + rep.rows[1].rmse)));
  CHECK(rep.mean_cc(Method::mcmc_tv, 0.5) ==
        doctest::Approx(0.5 * (*rep.rows[14].cc + *rep.rows[15].cc)));
  CHECK_THROWS_AS(rep.mean_rmse(Method::ifft, 0.2), ConfigError);
  CHECK_THROWS_AS(rep.mean_cc(Method::ifft, 0.3), ConfigError);

  const std::string csv = rep.to_csv();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "method,ratio,seed,rmse,cc,runtime_s");
  std::getline(in, line);
  CHECK(line.rfind("ifft,0.3,1,", 0) == 0);
  CHECK(line.back() == ',');
  std::size_t lines = 2;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 17);
  CHECK(rep.to_csv(true) != csv);

  plan.ratios.clear();
  CHECK_THROWS_AS(run_benchmark(plan), ConfigError);
}

TEST_CASE("benchmark output does not depend on the thread count") {
  BenchmarkPlan plan = tiny_plan();
  plan.methods = {Method::ifft, Method::mcmc_tv};
  const std::string one = run_benchmark(plan).to_csv();
  plan.threads = 3;
  CHECK(run_benchmark(plan).to_csv() == one);
}

TEST_CASE("benchmark writes per-cell maps") {
  BenchmarkPlan plan = tiny_plan();
  plan.ratios = {0.3};
  plan.seeds = {5};
  plan.methods = {Method::ifft, Method::mcmc_tv};
  const auto dir = std::filesystem::temp_directory_path() / "spamri_bench_maps";
  std::filesystem::remove_all(dir);
  plan.out_dir = dir.string();
  run_benchmark(plan);
  CHECK(std::filesystem::exists(dir / "truth.f64"));
  CHECK(std::filesystem::exists(dir / "truth.pgm"));
  const auto cell = dir / "r300_s5";
  for (const char* f : {"ifft_recon.f64", "ifft_error.pgm", "mcmc-tv_recon.pgm", "mcmc-tv_std.f64",
                        "mcmc-tv_std.pgm", "mcmc-tv_error.f64"}) {
    INFO(f);
    CHECK(std::filesystem::exists(cell / f));
  }
  CHECK_FALSE(std::filesystem::exists(cell / "ifft_std.f64"));
  std::filesystem::remove_all(dir);
}
