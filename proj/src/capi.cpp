#include "spamri/spamri.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "spamri/experiments.hpp"
#include "spamri/io.hpp"

struct spamri_image {
  spamri::ImageGrid g;
};
struct spamri_coils {
  spamri::CoilSensitivities c;
};
struct spamri_mask {
  spamri::SamplingMask m;
};
struct spamri_kspace {
  spamri::KSpaceData y;
};
struct spamri_result {
  spamri::ReconResult r;
};
struct spamri_report {
  spamri::BenchmarkReport rep;
};

namespace {

thread_local std::string g_last_error;

class ArgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
spamri_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SPAMRI_OK;
  } catch (const ArgError& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_INVALID_ARGUMENT;
  } catch (const spamri::ConfigError& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_CONFIG;
  } catch (const spamri::ShapeError& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_SHAPE;
  } catch (const spamri::IoError& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_IO;
  } catch (const spamri::NumericalError& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_NUMERICAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPAMRI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPAMRI_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SPAMRI_ERR_INTERNAL;
  }
}

template <class T>
void need(const T* p, const char* name) {
  if (p == nullptr) throw ArgError(std::string(name) + " must not be null");
}

std::string need_str(const char* s, const char* name) {
  need(s, name);
  return s;
}

// Enum parsers raise ConfigError; at the C boundary a bad string is an argument error.
template <class F>
auto parse_arg(F&& f, const char* s, const char* name) {
  const std::string v = need_str(s, name);
  try {
    return f(v);
  } catch (const spamri::ConfigError& e) {
    throw ArgError(e.what());
  }
}

const char* method_name(spamri::Method m) {
  switch (m) {
    case spamri::Method::ifft: return "ifft";
    case spamri::Method::admm_tv: return "admm-tv";
    case spamri::Method::admm_wav: return "admm-wav";
    case spamri::Method::mcmc_tv: return "mcmc-tv";
  }
  return "unknown";
}

const char* scheme_name(spamri::MaskScheme s) {
  return s == spamri::MaskScheme::uniform_random ? "uniform-random" : "variable-density-random";
}

spamri::MaskSpec to_spec(const spamri_mask_spec& s) {
  spamri::MaskSpec spec;
  spec.scheme = parse_arg(spamri::parse_mask_scheme, s.scheme, "spec.scheme");
  spec.ratio = s.ratio;
  spec.center_fraction = s.center_fraction;
  spec.seed = s.seed;
  return spec;
}

spamri::SamplerConfig to_sampler(const spamri_sampler_config& c) {
  spamri::SamplerConfig s;
  s.rho = c.rho;
  s.alpha = c.alpha;
  s.sigma = c.sigma;
  s.lambda = c.lambda;
  s.gamma = c.gamma;
  s.n_mc = c.n_mc;
  s.n_bi = c.n_bi;
  s.seed = c.seed;
  s.tau_init = c.tau_init;
  s.fix_tau = c.fix_tau != 0;
  s.tv.variant = c.tv_anisotropic ? spamri::TvVariant::anisotropic : spamri::TvVariant::isotropic;
  s.tv.max_iters = c.tv_max_iters;
  s.tv.tol = c.tv_tol;
  s.sapg.tau_min = c.tau_min;
  s.sapg.tau_max = c.tau_max;
  s.sapg.delta0 = c.delta0;
  s.sapg.decay = c.decay;
  s.sapg.dim = c.dim;
  return s;
}

spamri::AdmmConfig to_admm(const spamri_admm_config& c) {
  spamri::AdmmConfig a;
  a.reg_weight = c.reg_weight;
  a.penalty = c.penalty;
  a.max_iters = c.max_iters;
  a.tol = c.tol;
  a.cg_iters = c.cg_iters;
  a.prior = c.haar ? spamri::AdmmPrior::haar : spamri::AdmmPrior::tv;
  return a;
}

spamri::Problem make_problem(const spamri_kspace* y, const spamri_coils* coils,
                             const spamri_mask* mask) {
  need(y, "y");
  need(coils, "coils");
  need(mask, "mask");
  return spamri::Problem(y->y, coils->c, mask->m);
}

template <class T>
void emit(T** out, T* value) {
  *out = value;
}

std::vector<spamri::Method> parse_methods(const char* list) {
  const std::string s = need_str(list, "methods");
  std::vector<spamri::Method> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_arg(spamri::parse_method, item.c_str(), "methods"));
  }
  return out;
}

constexpr double kDefaultRatios[] = {0.05, 0.10, 0.20, 0.30, 0.40};
constexpr uint64_t kDefaultSeeds[] = {1, 2, 3};
constexpr double kDefaultGrid[] = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0, 3.0, 10.0};

}  // namespace

extern "C" {

const char* spamri_version(void) { return "1.0.0"; }

const char* spamri_last_error(void) { return g_last_error.c_str(); }

const char* spamri_status_name(spamri_status status) {
  switch (status) {
    case SPAMRI_OK: return "ok";
    case SPAMRI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SPAMRI_ERR_CONFIG: return "configuration error";
    case SPAMRI_ERR_SHAPE: return "shape mismatch";
    case SPAMRI_ERR_IO: return "i/o error";
    case SPAMRI_ERR_NUMERICAL: return "numerical failure";
    case SPAMRI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- images ----

spamri_status spamri_image_create(size_t height, size_t width, const double* data,
                                  spamri_image** out) {
  return guard([&] {
    need(out, "out");
    spamri::ImageGrid g(height, width);
    if (data != nullptr) std::memcpy(g.data(), data, g.size() * sizeof(double));
    emit(out, new spamri_image{std::move(g)});
  });
}

void spamri_image_free(spamri_image* img) { delete img; }

spamri_status spamri_image_shape(const spamri_image* img, size_t* height, size_t* width) {
  return guard([&] {
    need(img, "img");
    need(height, "height");
    need(width, "width");
    *height = img->g.height();
    *width = img->g.width();
  });
}

spamri_status spamri_image_copy(const spamri_image* img, double* out, size_t len) {
  return guard([&] {
    need(img, "img");
    need(out, "out");
    if (len < img->g.size()) throw ArgError("output buffer holds fewer than height*width values");
    std::memcpy(out, img->g.data(), img->g.size() * sizeof(double));
  });
}

spamri_status spamri_image_read(const char* path, spamri_image** out) {
  return guard([&] {
    need(out, "out");
    emit(out, new spamri_image{spamri::io::read_image(need_str(path, "path"))});
  });
}

spamri_status spamri_image_write(const spamri_image* img, const char* path) {
  return guard([&] {
    need(img, "img");
    spamri::io::write_image(need_str(path, "path"), img->g);
  });
}

spamri_status spamri_image_write_pgm(const spamri_image* img, const char* path) {
  return guard([&] {
    need(img, "img");
    spamri::io::write_pgm(need_str(path, "path"), img->g);
  });
}

spamri_status spamri_phantom(const char* kind, size_t height, size_t width, spamri_image** out) {
  return guard([&] {
    need(out, "out");
    const auto k = parse_arg(spamri::parse_phantom_kind, kind, "kind");
    emit(out, new spamri_image{spamri::make_phantom(k, height, width)});
  });
}

// ---- coils ----

spamri_status spamri_coils_make(size_t coils, size_t height, size_t width, const char* kind,
                                spamri_coils** out) {
  return guard([&] {
    need(out, "out");
    const auto k = parse_arg(spamri::parse_coil_kind, kind, "kind");
    emit(out, new spamri_coils{spamri::make_coils(coils, height, width, k)});
  });
}

spamri_status spamri_coils_create(size_t coils, size_t height, size_t width, const double* data,
                                  spamri_coils** out) {
  return guard([&] {
    need(out, "out");
    need(data, "data");
    if (coils < 1) throw spamri::ConfigError("coil count must be at least 1");
    std::vector<spamri::ComplexGrid> maps;
    for (size_t l = 0; l < coils; ++l) {
      spamri::ComplexGrid m(height, width);
      for (size_t i = 0; i < m.size(); ++i) {
        const size_t k = 2 * (l * m.size() + i);
        m[i] = spamri::Complex(data[k], data[k + 1]);
      }
      maps.push_back(std::move(m));
    }
    emit(out, new spamri_coils{spamri::CoilSensitivities(std::move(maps))});
  });
}

void spamri_coils_free(spamri_coils* coils) { delete coils; }

size_t spamri_coils_count(const spamri_coils* coils) { return coils ? coils->c.count() : 0; }

spamri_status spamri_coils_read(const char* path, spamri_coils** out) {
  return guard([&] {
    need(out, "out");
    emit(out, new spamri_coils{spamri::io::read_coils(need_str(path, "path"))});
  });
}

spamri_status spamri_coils_write(const spamri_coils* coils, const char* path) {
  return guard([&] {
    need(coils, "coils");
    spamri::io::write_coils(need_str(path, "path"), coils->c);
  });
}

// ---- masks ----

void spamri_mask_spec_default(spamri_mask_spec* spec) {
  if (spec == nullptr) return;
  const spamri::MaskSpec d;
  spec->scheme = scheme_name(d.scheme);
  spec->ratio = d.ratio;
  spec->center_fraction = d.center_fraction;
  spec->seed = d.seed;
}

spamri_status spamri_mask_make(const spamri_mask_spec* spec, size_t height, size_t width,
                               spamri_mask** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    emit(out, new spamri_mask{spamri::make_mask(to_spec(*spec), height, width)});
  });
}

spamri_status spamri_mask_create(size_t height, size_t width, const uint8_t* keep,
                                 spamri_mask** out) {
  return guard([&] {
    need(keep, "keep");
    need(out, "out");
    std::vector<std::uint8_t> k(keep, keep + height * width);
    for (auto& v : k) v = v != 0 ? 1 : 0;
    emit(out, new spamri_mask{spamri::SamplingMask(height, width, std::move(k))});
  });
}

void spamri_mask_free(spamri_mask* mask) { delete mask; }

size_t spamri_mask_count(const spamri_mask* mask) { return mask ? mask->m.count() : 0; }

spamri_status spamri_mask_copy(const spamri_mask* mask, uint8_t* out, size_t len) {
  return guard([&] {
    need(mask, "mask");
    need(out, "out");
    if (len < mask->m.size()) throw ArgError("output buffer holds fewer than height*width values");
    std::memcpy(out, mask->m.keep().data(), mask->m.size());
  });
}

spamri_status spamri_mask_write(const spamri_mask* mask, const spamri_mask_spec* spec,
                                const char* path) {
  return guard([&] {
    need(mask, "mask");
    spamri::MaskSpec s;
    if (spec != nullptr) {
      s = to_spec(*spec);
    } else {
      s.ratio = static_cast<double>(mask->m.count()) / static_cast<double>(mask->m.size());
      s.center_fraction = 0.0;
    }
    spamri::io::write_mask(need_str(path, "path"), mask->m, s);
  });
}

spamri_status spamri_mask_read(const char* path, spamri_mask** out) {
  return guard([&] {
    need(out, "out");
    emit(out, new spamri_mask{spamri::io::read_mask(need_str(path, "path"))});
  });
}

spamri_status spamri_mask_read_spec(const char* path, spamri_mask_spec* spec) {
  return guard([&] {
    need(spec, "spec");
    const spamri::MaskSpec s = spamri::io::read_mask_spec(need_str(path, "path"));
    spec->scheme = scheme_name(s.scheme);
    spec->ratio = s.ratio;
    spec->center_fraction = s.center_fraction;
    spec->seed = s.seed;
  });
}

// ---- k-space ----

spamri_status spamri_sigma_for_snr(const spamri_image* x, const spamri_coils* coils, double snr_db,
                                   double* sigma) {
  return guard([&] {
    need(x, "x");
    need(coils, "coils");
    need(sigma, "sigma");
    *sigma = spamri::sigma_for_snr(x->g, coils->c, snr_db);
  });
}

spamri_status spamri_simulate(const spamri_image* x, const spamri_coils* coils,
                              const spamri_mask* mask, double sigma, uint64_t seed,
                              spamri_kspace** out) {
  return guard([&] {
    need(x, "x");
    need(coils, "coils");
    need(mask, "mask");
    need(out, "out");
    emit(out, new spamri_kspace{spamri::simulate(x->g, coils->c, mask->m, sigma, seed)});
  });
}

void spamri_kspace_free(spamri_kspace* y) { delete y; }

double spamri_kspace_sigma(const spamri_kspace* y) { return y ? y->y.sigma : 0.0; }

size_t spamri_kspace_coil_count(const spamri_kspace* y) { return y ? y->y.coil_count() : 0; }

spamri_status spamri_kspace_write(const spamri_kspace* y, const char* path, const char* mask_file) {
  return guard([&] {
    need(y, "y");
    spamri::io::write_kspace(need_str(path, "path"), y->y, need_str(mask_file, "mask_file"));
  });
}

spamri_status spamri_kspace_read(const char* path, spamri_kspace** y, spamri_mask** mask) {
  return guard([&] {
    need(y, "y");
    spamri::io::LoadedKSpace loaded = spamri::io::read_kspace(need_str(path, "path"));
    auto* ks = new spamri_kspace{std::move(loaded.y)};
    if (mask != nullptr) {
      try {
        emit(mask, new spamri_mask{std::move(loaded.mask)});
      } catch (...) {
        delete ks;
        throw;
      }
    }
    emit(y, ks);
  });
}

void spamri_derive_seeds(uint64_t seed, uint64_t* mask_seed, uint64_t* noise_seed,
                         uint64_t* chain_seed) {
  const spamri::CellSeeds s = spamri::cell_seeds(seed);
  if (mask_seed) *mask_seed = s.mask;
  if (noise_seed) *noise_seed = s.noise;
  if (chain_seed) *chain_seed = s.chain;
}

// ---- reconstruction ----

void spamri_sampler_config_default(spamri_sampler_config* cfg) {
  if (cfg == nullptr) return;
  const spamri::SamplerConfig d;
  cfg->rho = d.rho;
  cfg->alpha = d.alpha;
  cfg->sigma = d.sigma;
  cfg->lambda = d.lambda;
  cfg->gamma = d.gamma;
  cfg->n_mc = d.n_mc;
  cfg->n_bi = d.n_bi;
  cfg->seed = d.seed;
  cfg->tau_init = d.tau_init;
  cfg->fix_tau = d.fix_tau ? 1 : 0;
  cfg->tv_anisotropic = d.tv.variant == spamri::TvVariant::anisotropic ? 1 : 0;
  cfg->tv_max_iters = d.tv.max_iters;
  cfg->tv_tol = d.tv.tol;
  cfg->tau_min = d.sapg.tau_min;
  cfg->tau_max = d.sapg.tau_max;
  cfg->delta0 = d.sapg.delta0;
  cfg->decay = d.sapg.decay;
  cfg->dim = d.sapg.dim;
}

void spamri_admm_config_default(spamri_admm_config* cfg) {
  if (cfg == nullptr) return;
  const spamri::AdmmConfig d;
  cfg->reg_weight = d.reg_weight;
  cfg->penalty = d.penalty;
  cfg->max_iters = d.max_iters;
  cfg->tol = d.tol;
  cfg->cg_iters = d.cg_iters;
  cfg->haar = d.prior == spamri::AdmmPrior::haar ? 1 : 0;
}

size_t spamri_default_weight_grid(double* out, size_t len) {
  const std::vector<double> g = spamri::default_reg_weight_grid();
  if (out != nullptr) {
    for (size_t i = 0; i < g.size() && i < len; ++i) out[i] = g[i];
  }
  return g.size();
}

spamri_status spamri_recon_ifft(const spamri_kspace* y, const spamri_coils* coils,
                                const spamri_mask* mask, spamri_image** out) {
  return guard([&] {
    need(out, "out");
    const spamri::Problem p = make_problem(y, coils, mask);
    emit(out, new spamri_image{spamri::ifft_recon(p.y, p.coils, p.mask)});
  });
}

spamri_status spamri_recon_admm(const spamri_kspace* y, const spamri_coils* coils,
                                const spamri_mask* mask, const spamri_admm_config* cfg,
                                spamri_image** out) {
  return guard([&] {
    need(cfg, "cfg");
    need(out, "out");
    const spamri::Problem p = make_problem(y, coils, mask);
    emit(out, new spamri_image{spamri::admm_recon(p.y, p.coils, p.mask, to_admm(*cfg))});
  });
}

spamri_status spamri_recon_admm_search(const spamri_kspace* y, const spamri_coils* coils,
                                       const spamri_mask* mask, const spamri_admm_config* cfg,
                                       const spamri_image* truth, const double* grid,
                                       size_t grid_len, spamri_image** out, double* best_weight) {
  return guard([&] {
    need(cfg, "cfg");
    need(truth, "truth");
    need(out, "out");
    const spamri::Problem p = make_problem(y, coils, mask);
    std::vector<double> g = grid != nullptr ? std::vector<double>(grid, grid + grid_len)
                                            : spamri::default_reg_weight_grid();
    spamri::WeightSearch ws =
        spamri::select_reg_weight(p.y, p.coils, p.mask, truth->g, to_admm(*cfg), g);
    if (best_weight != nullptr) *best_weight = ws.best_weight;
    emit(out, new spamri_image{std::move(ws.best_x)});
  });
}

spamri_status spamri_recon_mcmc(const spamri_kspace* y, const spamri_coils* coils,
                                const spamri_mask* mask, const spamri_sampler_config* cfg,
                                const spamri_image* init, spamri_progress_fn progress, void* user,
                                spamri_result** out) {
  return guard([&] {
    need(cfg, "cfg");
    need(out, "out");
    const spamri::Problem p = make_problem(y, coils, mask);
    const spamri::SamplerConfig sc = to_sampler(*cfg);
    sc.validate(p.y);
    spamri::ChainState state =
        init != nullptr ? spamri::initial_state(p, sc, init->g) : spamri::initial_state(p, sc);
    spamri::DiagnosticsSink sink;
    if (progress != nullptr) {
      sink = [progress, user](const spamri::DiagnosticsRow& r) {
        progress(r.iteration, r.tau, r.tv_x, r.misfit, user);
      };
    }
    emit(out, new spamri_result{spamri::run_chain(p, sc, std::move(state), sink)});
  });
}

void spamri_result_free(spamri_result* res) { delete res; }

spamri_status spamri_result_mmse(const spamri_result* res, spamri_image** out) {
  return guard([&] {
    need(res, "res");
    need(out, "out");
    emit(out, new spamri_image{res->r.mmse});
  });
}

spamri_status spamri_result_std(const spamri_result* res, spamri_image** out) {
  return guard([&] {
    need(res, "res");
    need(out, "out");
    emit(out, new spamri_image{res->r.std_map});
  });
}

size_t spamri_result_samples(const spamri_result* res) { return res ? res->r.n_used : 0; }

size_t spamri_result_tau_trace(const spamri_result* res, double* out, size_t len) {
  if (res == nullptr) return 0;
  const auto& t = res->r.tau_trace;
  if (out != nullptr) {
    for (size_t i = 0; i < t.size() && i < len; ++i) out[i] = t[i];
  }
  return t.size();
}

spamri_status spamri_result_write_tau_trace(const spamri_result* res, const char* path) {
  return guard([&] {
    need(res, "res");
    std::ostringstream s;
    s << "iteration,tau\n";
    for (size_t i = 0; i < res->r.tau_trace.size(); ++i) {
      s << (i + 1) << ',' << spamri::io::format_double(res->r.tau_trace[i]) << '\n';
    }
    spamri::io::write_text(need_str(path, "path"), s.str());
  });
}

spamri_status spamri_result_write_diagnostics(const spamri_result* res, const char* path) {
  return guard([&] {
    need(res, "res");
    std::ostringstream s;
    s << "iteration,tau,tv_x,misfit\n";
    for (const auto& r : res->r.diagnostics) {
      s << r.iteration << ',' << spamri::io::format_double(r.tau) << ','
        << spamri::io::format_double(r.tv_x) << ',' << spamri::io::format_double(r.misfit) << '\n';
    }
    spamri::io::write_text(need_str(path, "path"), s.str());
  });
}

// ---- metrics ----

spamri_status spamri_rmse(const spamri_image* a, const spamri_image* b, double* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = spamri::rmse(a->g, b->g);
  });
}

spamri_status spamri_corrcoef(const spamri_image* u, const spamri_image* v, double* out) {
  return guard([&] {
    need(u, "u");
    need(v, "v");
    need(out, "out");
    *out = spamri::corrcoef(u->g, v->g);
  });
}

spamri_status spamri_abs_error(const spamri_image* a, const spamri_image* b, spamri_image** out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    emit(out, new spamri_image{spamri::abs_error(a->g, b->g)});
  });
}

// ---- benchmark ----

void spamri_benchmark_plan_default(spamri_benchmark_plan* plan) {
  if (plan == nullptr) return;
  const spamri::BenchmarkPlan d;
  plan->phantom = "shepp-logan";
  plan->height = d.height;
  plan->width = d.width;
  plan->coils = d.coils;
  plan->coil_kind = "ones";
  plan->snr_db = d.snr_db;
  plan->scheme = scheme_name(d.scheme);
  plan->center_fraction = d.center_fraction;
  plan->ratios = kDefaultRatios;
  plan->n_ratios = std::size(kDefaultRatios);
  plan->seeds = kDefaultSeeds;
  plan->n_seeds = std::size(kDefaultSeeds);
  plan->methods = "ifft,admm-wav,admm-tv,mcmc-tv";
  spamri_sampler_config_default(&plan->sampler);
  spamri_admm_config_default(&plan->admm);
  plan->weight_grid = kDefaultGrid;
  plan->n_weights = std::size(kDefaultGrid);
  plan->search_weights = 1;
  plan->threads = d.threads;
  plan->out_dir = nullptr;
}

spamri_status spamri_benchmark_run(const spamri_benchmark_plan* plan, spamri_report** out) {
  return guard([&] {
    need(plan, "plan");
    need(out, "out");
    spamri::BenchmarkPlan p;
    p.phantom = parse_arg(spamri::parse_phantom_kind, plan->phantom, "phantom");
    p.height = plan->height;
    p.width = plan->width;
    p.coils = plan->coils;
    p.coil_kind = parse_arg(spamri::parse_coil_kind, plan->coil_kind, "coil_kind");
    p.snr_db = plan->snr_db;
    p.scheme = parse_arg(spamri::parse_mask_scheme, plan->scheme, "scheme");
    p.center_fraction = plan->center_fraction;
    if (plan->n_ratios > 0) need(plan->ratios, "ratios");
    if (plan->n_seeds > 0) need(plan->seeds, "seeds");
    p.ratios.assign(plan->ratios, plan->ratios + plan->n_ratios);
    p.seeds.assign(plan->seeds, plan->seeds + plan->n_seeds);
    p.methods = parse_methods(plan->methods);
    p.sampler = to_sampler(plan->sampler);
    p.admm = to_admm(plan->admm);
    if (!plan->search_weights) {
      p.reg_weight_grid.clear();
    } else if (plan->weight_grid != nullptr) {
      p.reg_weight_grid.assign(plan->weight_grid, plan->weight_grid + plan->n_weights);
      if (p.reg_weight_grid.empty()) throw spamri::ConfigError("weight grid is empty");
    }
    p.threads = plan->threads;
    p.out_dir = plan->out_dir != nullptr ? plan->out_dir : "";
    emit(out, new spamri_report{spamri::run_benchmark(p)});
  });
}

spamri_status spamri_report_create(spamri_report** out) {
  return guard([&] {
    need(out, "out");
    emit(out, new spamri_report{});
  });
}

void spamri_report_free(spamri_report* report) { delete report; }

spamri_status spamri_report_add_row(spamri_report* report, const spamri_report_row* row) {
  return guard([&] {
    need(report, "report");
    need(row, "row");
    spamri::BenchmarkRow r;
    r.method = parse_arg(spamri::parse_method, row->method, "row.method");
    r.ratio = row->ratio;
    r.seed = row->seed;
    if (!(row->rmse >= 0.0)) throw spamri::ConfigError("rmse must be non-negative");
    r.rmse = row->rmse;
    if (row->has_cc) {
      if (!(row->cc >= -1.0 && row->cc <= 1.0)) throw spamri::ConfigError("cc must lie in [-1, 1]");
      r.cc = row->cc;
    }
    r.runtime_s = row->runtime_s;
    if (row->has_weight) r.weight = row->weight;
    report->rep.rows.push_back(r);
  });
}

size_t spamri_report_row_count(const spamri_report* report) {
  return report ? report->rep.rows.size() : 0;
}

spamri_status spamri_report_row_at(const spamri_report* report, size_t index,
                                   spamri_report_row* row) {
  return guard([&] {
    need(report, "report");
    need(row, "row");
    if (index >= report->rep.rows.size()) throw ArgError("row index out of range");
    const spamri::BenchmarkRow& r = report->rep.rows[index];
    row->method = method_name(r.method);
    row->ratio = r.ratio;
    row->seed = r.seed;
    row->rmse = r.rmse;
    row->has_cc = r.cc ? 1 : 0;
    row->cc = r.cc.value_or(0.0);
    row->runtime_s = r.runtime_s;
    row->has_weight = r.weight ? 1 : 0;
    row->weight = r.weight.value_or(0.0);
  });
}

spamri_status spamri_report_mean_rmse(const spamri_report* report, const char* method,
                                      double ratio, double* out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    *out = report->rep.mean_rmse(parse_arg(spamri::parse_method, method, "method"), ratio);
  });
}

spamri_status spamri_report_mean_cc(const spamri_report* report, const char* method, double ratio,
                                    double* out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    *out = report->rep.mean_cc(parse_arg(spamri::parse_method, method, "method"), ratio);
  });
}

spamri_status spamri_report_csv(const spamri_report* report, int with_timing, char* buf,
                                size_t cap, size_t* len) {
  return guard([&] {
    need(report, "report");
    need(len, "len");
    const std::string csv = report->rep.to_csv(with_timing != 0);
    *len = csv.size();
    if (buf == nullptr) return;
    if (cap <= csv.size()) throw ArgError("buffer too small for report CSV");
    std::memcpy(buf, csv.c_str(), csv.size() + 1);
  });
}

spamri_status spamri_report_write_csv(const spamri_report* report, int with_timing,
                                      const char* path) {
  return guard([&] {
    need(report, "report");
    spamri::io::write_text(need_str(path, "path"), report->rep.to_csv(with_timing != 0));
  });
}

}  // extern "C"
