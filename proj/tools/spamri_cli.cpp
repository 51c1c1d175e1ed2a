// spamri command-line front end. Talks to the library only through its C API.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "spamri/spamri.h"

namespace fs = std::filesystem;
using spamri_cli::RunConfig;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kInput = 3, kNumerical = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(spamri_status s) {
  switch (s) {
    case SPAMRI_OK: return kOk;
    case SPAMRI_ERR_INVALID_ARGUMENT:
    case SPAMRI_ERR_CONFIG: return kConfig;
    case SPAMRI_ERR_SHAPE:
    case SPAMRI_ERR_IO: return kInput;
    case SPAMRI_ERR_NUMERICAL: return kNumerical;
    case SPAMRI_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

void check(spamri_status s) {
  if (s != SPAMRI_OK) throw Failure{exit_code_for(s), spamri_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Image = std::unique_ptr<spamri_image, Deleter<spamri_image, spamri_image_free>>;
using Coils = std::unique_ptr<spamri_coils, Deleter<spamri_coils, spamri_coils_free>>;
using Mask = std::unique_ptr<spamri_mask, Deleter<spamri_mask, spamri_mask_free>>;
using KSpace = std::unique_ptr<spamri_kspace, Deleter<spamri_kspace, spamri_kspace_free>>;
using Result = std::unique_ptr<spamri_result, Deleter<spamri_result, spamri_result_free>>;
using Report = std::unique_ptr<spamri_report, Deleter<spamri_report, spamri_report_free>>;

void config_fail(const std::string& msg) { throw Failure{kConfig, msg}; }

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> m{"ifft", "admm-wav", "admm-tv", "mcmc-tv"};
  return m;
}

std::string checked_method(const std::string& m) {
  for (const auto& k : method_names()) {
    if (k == m) return m;
  }
  config_fail("unknown method '" + m + "' (expected mcmc-tv | admm-tv | admm-wav | ifft)");
  return m;
}

spamri_mask_spec mask_spec(const RunConfig& cfg, std::uint64_t mask_seed) {
  spamri_mask_spec spec;
  spamri_mask_spec_default(&spec);
  spec.scheme = cfg.str("scheme").c_str();
  spec.ratio = cfg.num("ratio");
  spec.center_fraction = cfg.num("center_fraction");
  spec.seed = mask_seed;
  return spec;
}

spamri_sampler_config sampler_config(const RunConfig& cfg, std::uint64_t chain_seed) {
  spamri_sampler_config s;
  spamri_sampler_config_default(&s);
  s.rho = cfg.num("rho");
  s.alpha = cfg.num("alpha");
  s.sigma = cfg.num("sigma");
  s.lambda = cfg.num("lambda");
  s.gamma = cfg.num("gamma");
  s.n_mc = cfg.uint("n_mc");
  s.n_bi = cfg.uint("n_bi");
  s.seed = chain_seed;
  s.tau_init = cfg.num("tau_init");
  s.fix_tau = cfg.flag("fix_tau") ? 1 : 0;
  const std::string& variant = cfg.str("tv_variant");
  if (variant != "isotropic" && variant != "anisotropic") {
    config_fail("tv_variant must be isotropic or anisotropic");
  }
  s.tv_anisotropic = variant == "anisotropic" ? 1 : 0;
  s.tv_max_iters = static_cast<int>(cfg.uint("tv_max_iters"));
  s.tv_tol = cfg.num("tv_tol");
  s.tau_min = cfg.num("tau_min");
  s.tau_max = cfg.num("tau_max");
  s.delta0 = cfg.num("delta0");
  s.decay = cfg.num("decay");
  s.dim = cfg.num("sapg_dim");
  return s;
}

spamri_admm_config admm_config(const RunConfig& cfg, bool haar) {
  spamri_admm_config a;
  spamri_admm_config_default(&a);
  a.reg_weight = cfg.num("reg_weight");
  a.penalty = cfg.num("admm_penalty");
  a.max_iters = static_cast<int>(cfg.uint("admm_max_iters"));
  a.tol = cfg.num("admm_tol");
  a.cg_iters = static_cast<int>(cfg.uint("admm_cg_iters"));
  a.haar = haar ? 1 : 0;
  return a;
}

bool search_weights(const RunConfig& cfg) {
  const std::string& v = cfg.str("weight_search");
  if (v == "auto") return true;
  if (v == "off") return false;
  config_fail("weight_search must be auto or off");
  return false;
}

void ensure_parent(const std::string& path) {
  const fs::path p = fs::path(path).parent_path();
  if (!p.empty()) fs::create_directories(p);
}

std::string out_file(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.str("out_dir")) / name).string();
}

void write_image_pair(const spamri_image* img, const std::string& stem) {
  check(spamri_image_write(img, (stem + ".f64").c_str()));
  check(spamri_image_write_pgm(img, (stem + ".pgm").c_str()));
}

std::uint64_t derived(std::uint64_t seed, int which) {
  std::uint64_t s[3];
  spamri_derive_seeds(seed, &s[0], &s[1], &s[2]);
  return s[which];
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// ---- commands ----

int cmd_mask_gen(const RunConfig& cfg) {
  const std::uint64_t seed = cfg.uint("seed");
  const spamri_mask_spec spec = mask_spec(cfg, derived(seed, 0));
  spamri_mask* raw = nullptr;
  check(spamri_mask_make(&spec, cfg.uint("height"), cfg.uint("width"), &raw));
  Mask mask(raw);
  const std::string path = cfg.path("mask_file", "mask.pbm");
  ensure_parent(path);
  check(spamri_mask_write(mask.get(), &spec, path.c_str()));
  std::cout << "mask: " << path << " (" << spamri_mask_count(mask.get()) << " of "
            << cfg.uint("height") * cfg.uint("width") << " locations)\n";
  return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const std::uint64_t seed = cfg.uint("seed");
  const std::size_t h = cfg.uint("height");
  const std::size_t w = cfg.uint("width");
  fs::create_directories(cfg.str("out_dir"));

  spamri_image* img_raw = nullptr;
  check(spamri_phantom(cfg.str("phantom").c_str(), h, w, &img_raw));
  Image truth(img_raw);
  spamri_coils* coils_raw = nullptr;
  check(spamri_coils_make(cfg.uint("coils"), h, w, cfg.str("coil_kind").c_str(), &coils_raw));
  Coils coils(coils_raw);
  const spamri_mask_spec spec = mask_spec(cfg, derived(seed, 0));
  spamri_mask* mask_raw = nullptr;
  check(spamri_mask_make(&spec, h, w, &mask_raw));
  Mask mask(mask_raw);
  double sigma = 0.0;
  check(spamri_sigma_for_snr(truth.get(), coils.get(), cfg.num("snr_db"), &sigma));
  spamri_kspace* ks_raw = nullptr;
  check(spamri_simulate(truth.get(), coils.get(), mask.get(), sigma, derived(seed, 1), &ks_raw));
  KSpace y(ks_raw);

  const std::string truth_path = cfg.path("truth_file", "truth.f64");
  const std::string coils_path = cfg.path("coils_file", "coils.c128");
  const std::string mask_path = cfg.path("mask_file", "mask.pbm");
  const std::string kspace_path = cfg.path("kspace_file", "kspace.c128");
  for (const auto& p : {truth_path, coils_path, mask_path, kspace_path}) ensure_parent(p);
  check(spamri_image_write(truth.get(), truth_path.c_str()));
  const std::string pgm = (fs::path(truth_path).replace_extension(".pgm")).string();
  check(spamri_image_write_pgm(truth.get(), pgm.c_str()));
  check(spamri_coils_write(coils.get(), coils_path.c_str()));
  check(spamri_mask_write(mask.get(), &spec, mask_path.c_str()));
  const std::string rel_mask =
      fs::relative(fs::absolute(mask_path), fs::absolute(kspace_path).parent_path()).string();
  check(spamri_kspace_write(y.get(), kspace_path.c_str(), rel_mask.c_str()));

  std::cout << "truth:  " << truth_path << "\n"
            << "image:  " << pgm << "\n"
            << "coils:  " << coils_path << "\n"
            << "mask:   " << mask_path << " (" << spamri_mask_count(mask.get()) << " kept)\n"
            << "kspace: " << kspace_path << " (sigma " << fmt(sigma) << ")\n";
  return kOk;
}

int cmd_reconstruct(const RunConfig& cfg) {
  const std::string method = checked_method(cfg.str("method"));
  const std::uint64_t seed = cfg.uint("seed");
  const std::string kspace_path = cfg.path("kspace_file", "kspace.c128");
  const std::string coils_path = cfg.path("coils_file", "coils.c128");
  const std::string truth_path = cfg.path("truth_file", "truth.f64");
  fs::create_directories(cfg.str("out_dir"));
  const std::string stem = out_file(cfg, method);

  spamri_kspace* ks_raw = nullptr;
  spamri_mask* mask_raw = nullptr;
  check(spamri_kspace_read(kspace_path.c_str(), &ks_raw, &mask_raw));
  KSpace y(ks_raw);
  Mask mask(mask_raw);
  spamri_coils* coils_raw = nullptr;
  check(spamri_coils_read(coils_path.c_str(), &coils_raw));
  Coils coils(coils_raw);

  const auto t0 = std::chrono::steady_clock::now();
  Image x;
  Image std_map;
  if (method == "ifft") {
    spamri_image* raw = nullptr;
    check(spamri_recon_ifft(y.get(), coils.get(), mask.get(), &raw));
    x.reset(raw);
  } else if (method == "admm-tv" || method == "admm-wav") {
    const spamri_admm_config a = admm_config(cfg, method == "admm-wav");
    spamri_image* raw = nullptr;
    if (search_weights(cfg) && fs::exists(truth_path)) {
      spamri_image* truth_raw = nullptr;
      check(spamri_image_read(truth_path.c_str(), &truth_raw));
      Image truth(truth_raw);
      const std::vector<double> grid = cfg.num_list("weight_grid");
      double best = 0.0;
      check(spamri_recon_admm_search(y.get(), coils.get(), mask.get(), &a, truth.get(),
                                     grid.data(), grid.size(), &raw, &best));
      std::cout << "selected reg_weight " << fmt(best) << " against " << truth_path << "\n";
    } else {
      check(spamri_recon_admm(y.get(), coils.get(), mask.get(), &a, &raw));
    }
    x.reset(raw);
  } else {
    const spamri_sampler_config s = sampler_config(cfg, derived(seed, 2));
    spamri_result* res_raw = nullptr;
    check(spamri_recon_mcmc(y.get(), coils.get(), mask.get(), &s, nullptr, nullptr, nullptr,
                            &res_raw));
    Result res(res_raw);
    spamri_image* raw = nullptr;
    check(spamri_result_mmse(res.get(), &raw));
    x.reset(raw);
    check(spamri_result_std(res.get(), &raw));
    std_map.reset(raw);
    check(spamri_result_write_tau_trace(res.get(), out_file(cfg, "tau_trace.csv").c_str()));
    check(spamri_result_write_diagnostics(res.get(), out_file(cfg, "diagnostics.csv").c_str()));
    const std::size_t n = spamri_result_tau_trace(res.get(), nullptr, 0);
    std::vector<double> trace(n);
    spamri_result_tau_trace(res.get(), trace.data(), n);
    std::cout << "samples used " << spamri_result_samples(res.get());
    if (n > 0) std::cout << ", final tau " << fmt(trace.back());
    std::cout << "\n";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_image_pair(x.get(), stem + "_recon");
  if (std_map) write_image_pair(std_map.get(), stem + "_std");
  std::ofstream(stem + "_runtime.txt") << fmt(seconds, 17) << "\n";
  std::cout << method << " reconstruction: " << stem << "_recon.f64 (" << fmt(seconds, 3)
            << " s)\n";
  return kOk;
}

void print_summary(const spamri_report* report) {
  const std::size_t n = spamri_report_row_count(report);
  std::printf("%-10s %7s %6s %10s %8s\n", "method", "ratio", "seed", "rmse", "cc");
  for (std::size_t i = 0; i < n; ++i) {
    spamri_report_row r;
    check(spamri_report_row_at(report, i, &r));
    std::printf("%-10s %7.3f %6llu %10.5f %8s\n", r.method, r.ratio,
                static_cast<unsigned long long>(r.seed), r.rmse,
                r.has_cc ? fmt(r.cc, 3).c_str() : "-");
  }
}

int cmd_report(const RunConfig& cfg) {
  const std::string truth_path = cfg.path("truth_file", "truth.f64");
  const std::string mask_path = cfg.path("mask_file", "mask.pbm");
  spamri_image* truth_raw = nullptr;
  check(spamri_image_read(truth_path.c_str(), &truth_raw));
  Image truth(truth_raw);
  spamri_mask_spec spec;
  check(spamri_mask_read_spec(mask_path.c_str(), &spec));

  spamri_report* rep_raw = nullptr;
  check(spamri_report_create(&rep_raw));
  Report report(rep_raw);
  const bool want_cc = cfg.flag("report_cc");
  const bool timing = cfg.flag("report_timing");
  for (const auto& m : cfg.str_list("methods")) {
    const std::string method = checked_method(m);
    const std::string stem = out_file(cfg, method);
    const std::string recon_path = stem + "_recon.f64";
    if (!fs::exists(recon_path)) continue;
    spamri_image* raw = nullptr;
    check(spamri_image_read(recon_path.c_str(), &raw));
    Image x(raw);
    spamri_report_row row{};
    row.method = method.c_str();
    row.ratio = spec.ratio;
    row.seed = cfg.uint("seed");
    check(spamri_rmse(x.get(), truth.get(), &row.rmse));
    check(spamri_abs_error(x.get(), truth.get(), &raw));
    Image err(raw);
    write_image_pair(err.get(), stem + "_error");
    if (method == "mcmc-tv" && want_cc) {
      const std::string std_path = stem + "_std.f64";
      if (!fs::exists(std_path)) {
        throw Failure{kInput, "missing std map " + std_path + " (needed for cc)"};
      }
      check(spamri_image_read(std_path.c_str(), &raw));
      Image sd(raw);
      check(spamri_corrcoef(sd.get(), err.get(), &row.cc));
      row.has_cc = 1;
    }
    if (timing) {
      std::ifstream t(stem + "_runtime.txt");
      if (!(t >> row.runtime_s)) {
        throw Failure{kInput, "missing runtime file " + stem + "_runtime.txt"};
      }
    }
    check(spamri_report_add_row(report.get(), &row));
  }
  if (spamri_report_row_count(report.get()) == 0) {
    throw Failure{kInput, "no reconstructions found in " + cfg.str("out_dir")};
  }
  const std::string report_path = cfg.path("report_file", "report.csv");
  ensure_parent(report_path);
  check(spamri_report_write_csv(report.get(), timing ? 1 : 0, report_path.c_str()));
  print_summary(report.get());
  std::cout << "report: " << report_path << "\n";
  return kOk;
}

int cmd_benchmark(const RunConfig& cfg) {
  spamri_benchmark_plan plan;
  spamri_benchmark_plan_default(&plan);
  const std::string phantom = cfg.str("phantom");
  const std::string coil_kind = cfg.str("coil_kind");
  const std::string scheme = cfg.str("scheme");
  std::string methods;
  for (const auto& m : cfg.str_list("methods")) {
    methods += (methods.empty() ? "" : ",") + checked_method(m);
  }
  const std::vector<double> ratios = cfg.num_list("ratios");
  const std::vector<std::uint64_t> seeds = cfg.uint_list("seeds");
  const std::vector<double> grid = cfg.num_list("weight_grid");
  const std::string out_dir = cfg.str("out_dir");
  const std::string maps_dir = cfg.flag("write_maps") ? out_dir : "";

  plan.phantom = phantom.c_str();
  plan.height = cfg.uint("height");
  plan.width = cfg.uint("width");
  plan.coils = cfg.uint("coils");
  plan.coil_kind = coil_kind.c_str();
  plan.snr_db = cfg.num("snr_db");
  plan.scheme = scheme.c_str();
  plan.center_fraction = cfg.num("center_fraction");
  plan.ratios = ratios.data();
  plan.n_ratios = ratios.size();
  plan.seeds = seeds.data();
  plan.n_seeds = seeds.size();
  plan.methods = methods.c_str();
  plan.sampler = sampler_config(cfg, 0);
  plan.admm = admm_config(cfg, false);
  plan.weight_grid = grid.data();
  plan.n_weights = grid.size();
  plan.search_weights = search_weights(cfg) ? 1 : 0;
  plan.threads = static_cast<unsigned>(cfg.uint("threads"));
  plan.out_dir = maps_dir.c_str();

  fs::create_directories(out_dir);
  spamri_report* raw = nullptr;
  check(spamri_benchmark_run(&plan, &raw));
  Report report(raw);
  const std::string report_path = cfg.path("report_file", "report.csv");
  ensure_parent(report_path);
  check(spamri_report_write_csv(report.get(), cfg.flag("report_timing") ? 1 : 0,
                                report_path.c_str()));

  std::printf("%-10s", "mean rmse");
  for (double r : ratios) std::printf(" %9.2f", r);
  std::printf("\n");
  for (const auto& m : cfg.str_list("methods")) {
    std::printf("%-10s", m.c_str());
    for (double r : ratios) {
      double v = 0.0;
      check(spamri_report_mean_rmse(report.get(), m.c_str(), r, &v));
      std::printf(" %9.5f", v);
    }
    std::printf("\n");
    if (m == "mcmc-tv") {
      std::printf("%-10s", "  mean cc");
      for (double r : ratios) {
        double v = 0.0;
        check(spamri_report_mean_cc(report.get(), m.c_str(), r, &v));
        std::printf(" %9.3f", v);
      }
      std::printf("\n");
    }
  }
  std::cout << "report: " << report_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spamri: MR reconstruction with uncertainty from under-sampled k-space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(spamri_version()));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> ratio;
  std::string method;
  std::string out_dir;
  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value configuration file");
    sub->add_option("--seed", seed, "top-level seed");
    sub->add_option("--ratio", ratio, "sampling ratio");
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_option("--set", sets, "override any config key (key=value), repeatable");
  };

  auto* simulate = app.add_subcommand("simulate", "write phantom, coil maps, mask and k-space");
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct an image from k-space");
  auto* report = app.add_subcommand("report", "score reconstructions against the truth image");
  auto* mask_gen = app.add_subcommand("mask-gen", "write a sampling mask");
  auto* benchmark = app.add_subcommand("benchmark", "run every method over ratios and seeds");
  auto* show = app.add_subcommand("show-config", "print every config key with its value");
  for (auto* sub : {simulate, reconstruct, report, mask_gen, benchmark, show}) add_common(sub);
  reconstruct->add_option("--method", method, "mcmc-tv | admm-tv | admm-wav | ifft");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& s : sets) cfg.set_assignment(s);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (ratio) {
      std::ostringstream r;
      r.precision(17);
      r << *ratio;
      cfg.set("ratio", r.str());
    }
    if (!method.empty()) cfg.set("method", method);
    if (!out_dir.empty()) cfg.set("out_dir", out_dir);

    if (*simulate) return cmd_simulate(cfg);
    if (*reconstruct) return cmd_reconstruct(cfg);
    if (*report) return cmd_report(cfg);
    if (*mask_gen) return cmd_mask_gen(cfg);
    if (*benchmark) return cmd_benchmark(cfg);
    std::cout << cfg.dump();
    return kOk;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const spamri_cli::ConfigKeyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}
