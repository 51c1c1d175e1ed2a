#include "spamri/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spamri {

void SamplerConfig::validate(const KSpaceData& y) const {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(resolved_sigma(y) > 0.0)) {
    throw ConfigError("noise sigma must be positive (set it or store it with the k-space data)");
  }
  if (!(resolved_gamma() > 0.0)) throw ConfigError("gamma must be positive");
  if (!(resolved_lambda() > 0.0)) throw ConfigError("lambda must be positive");
  if (resolved_gamma() > resolved_lambda()) {
    throw ConfigError("Langevin step gamma must not exceed lambda");
  }
  if (n_mc < 1 || n_bi >= n_mc) throw ConfigError("need n_bi < n_mc");
  if (tau_init != 0.0 && !(tau_init >= sapg.tau_min && tau_init <= sapg.tau_max)) {
    throw ConfigError("tau_init must be 0 (automatic) or lie in [tau_min, tau_max]");
  }
  tv.validate();
  sapg.validate();
}

Problem::Problem(KSpaceData data, CoilSensitivities c, SamplingMask m)
    : y(std::move(data)), coils(std::move(c)), mask(std::move(m)) {
  require_compatible(coils, mask);
  require_compatible(y, mask);
  if (y.coil_count() != coils.count()) {
    throw ShapeError("k-space coil count differs from coil sensitivity count");
  }
}

namespace {

bool finite_stack(const CoilStack& s) {
  for (const auto& g : s) {
    if (!spamri::all_finite(g)) return false;
  }
  return true;
}

bool finite_compact(const CompactStack& s) {
  for (const auto& v : s) {
    for (const Complex& z : v) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

Complex complex_normal(Rng& rng, double std_dev) {
  const double re = rng.normal();
  const double im = rng.normal();
  return Complex(std_dev * re, std_dev * im);
}

}  // namespace

bool ChainState::all_finite() const {
  return spamri::all_finite(x) && spamri::all_finite(b) && spamri::all_finite(h1) &&
         finite_compact(c) && finite_compact(h2) && finite_stack(d) && finite_stack(e) &&
         finite_stack(h3) && finite_stack(h4) && std::isfinite(tau);
}

void RunningMoments::add(const ImageGrid& sample) {
  require_same_shape(sample, mean_, "RunningMoments::add");
  ++n_;
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double delta = sample[i] - mean_[i];
    mean_[i] += delta * inv_n;
    m2_[i] += delta * (sample[i] - mean_[i]);
  }
}

ImageGrid RunningMoments::variance() const {
  ImageGrid v(mean_.height(), mean_.width());
  if (n_ == 0) return v;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m2_[i] / static_cast<double>(n_);
  return v;
}

ImageGrid RunningMoments::std_dev() const {
  ImageGrid v = variance();
  for (double& s : v.values()) s = std::sqrt(std::max(s, 0.0));
  return v;
}

ChainState initial_state(const Problem& p, const SamplerConfig& cfg) {
  ImageGrid x0 = forward_adjoint(p.y, p.coils, p.mask);
  const ImageGrid& ss = p.coils.sum_of_squares();
  for (std::size_t i = 0; i < x0.size(); ++i) x0[i] /= ss[i];
  return initial_state(p, cfg, x0);
}

ChainState initial_state(const Problem& p, const SamplerConfig& cfg, const ImageGrid& x0) {
  if (x0.height() != p.height() || x0.width() != p.width()) {
    throw ShapeError("initial image shape differs from the k-space grid");
  }
  ChainState s;
  s.x = x0;
  s.b = s.x;
  s.h1 = ImageGrid(s.x.height(), s.x.width());
  s.e = apply_phi(s.x, p.coils);
  s.d = dft2(s.e);
  s.c = apply_mask(s.d, p.mask).coils;
  s.h2.assign(s.c.size(), std::vector<Complex>(p.mask.count()));
  s.h3.assign(s.d.size(), ComplexGrid(s.x.height(), s.x.width()));
  s.h4 = s.h3;
  if (cfg.tau_init > 0.0) {
    s.tau = cfg.tau_init;
  } else {
    const double tv0 = tv_value(s.x, cfg.tv.variant);
    const double dim = cfg.sapg.resolved_dim(s.x.size());
    s.tau = tv0 > 0.0 ? std::clamp(dim / tv0, cfg.sapg.tau_min, cfg.sapg.tau_max) : cfg.sapg.tau_max;
  }
  return s;
}

ImageGrid sample_x(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng) {
  CoilStack r = s.e;
  for (std::size_t l = 0; l < r.size(); ++l) {
    for (std::size_t i = 0; i < r[l].size(); ++i) r[l][i] -= s.h4[l][i];
  }
  const ImageGrid coil_term = apply_phi_adjoint(r, p.coils);
  const ImageGrid& ss = p.coils.sum_of_squares();
  const double rho2 = cfg.rho * cfg.rho;
  ImageGrid x(s.x.height(), s.x.width());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double precision_scale = ss[i] + 1.0;
    const double mean = (coil_term[i] + s.b[i] - s.h1[i]) / precision_scale;
    const double std_dev = std::sqrt(rho2 / precision_scale);
    x[i] = mean + std_dev * rng.normal();
  }
  return x;
}

ImageGrid myula_drift(const ChainState& s, const SamplerConfig& cfg) {
  const double lambda = cfg.resolved_lambda();
  const double gamma = cfg.resolved_gamma();
  const double rho2 = cfg.rho * cfg.rho;
  const ImageGrid prox = tv_prox(s.b, s.tau * lambda, cfg.tv);
  ImageGrid out(s.b.height(), s.b.width());
  const double keep = 1.0 - gamma / lambda;
  const double pull = gamma / lambda;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double grad_f = (s.b[i] - s.x[i] - s.h1[i]) / rho2;
    out[i] = keep * s.b[i] - gamma * grad_f + pull * prox[i];
  }
  return out;
}

ImageGrid sample_b(const ChainState& s, const SamplerConfig& cfg, Rng& rng) {
  ImageGrid b = myula_drift(s, cfg);
  const double noise = std::sqrt(2.0 * cfg.resolved_gamma());
  for (double& v : b.values()) v += noise * rng.normal();
  return b;
}

CompactStack sample_c(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng) {
  const double rho2 = cfg.rho * cfg.rho;
  const double sigma = cfg.resolved_sigma(p.y);
  const double sig2 = sigma * sigma;
  const double var = rho2 * sig2 / (rho2 + sig2);
  const double std_dev = std::sqrt(var);
  const auto& idx = p.mask.indices();
  CompactStack c(s.c.size(), std::vector<Complex>(idx.size()));
  for (std::size_t l = 0; l < c.size(); ++l) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Complex sd = s.d[l][idx[k]];
      const Complex mean = (rho2 * p.y.coils[l][k] + sig2 * (sd + s.h2[l][k])) / (sig2 + rho2);
      c[l][k] = mean + complex_normal(rng, std_dev);
    }
  }
  return c;
}

CoilStack sample_d(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng) {
  const double rho = cfg.rho;
  const double std_sampled = rho / std::sqrt(2.0);
  CoilStack d = dft2(s.e);
  std::vector<std::size_t> slot(p.mask.size(), 0);
  for (std::size_t k = 0; k < p.mask.count(); ++k) slot[p.mask.indices()[k]] = k;
  for (std::size_t l = 0; l < d.size(); ++l) {
    for (std::size_t i = 0; i < d[l].size(); ++i) {
      const Complex fe_h3 = d[l][i] + s.h3[l][i];
      if (p.mask.kept(i)) {
        const std::size_t k = slot[i];
        d[l][i] = 0.5 * (s.c[l][k] - s.h2[l][k] + fe_h3) + complex_normal(rng, std_sampled);
      } else {
        d[l][i] = fe_h3 + complex_normal(rng, rho);
      }
    }
  }
  return d;
}

CoilStack sample_e(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng) {
  CoilStack r = s.d;
  for (std::size_t l = 0; l < r.size(); ++l) {
    for (std::size_t i = 0; i < r[l].size(); ++i) r[l][i] -= s.h3[l][i];
  }
  CoilStack e = idft2(r);
  const CoilStack phix = apply_phi(s.x, p.coils);
  const double std_dev = cfg.rho / std::sqrt(2.0);
  for (std::size_t l = 0; l < e.size(); ++l) {
    for (std::size_t i = 0; i < e[l].size(); ++i) {
      e[l][i] = 0.5 * (phix[l][i] + s.h4[l][i] + e[l][i]) + complex_normal(rng, std_dev);
    }
  }
  return e;
}

AuxiliaryDraw sample_h(const ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng) {
  const double rho2 = cfg.rho * cfg.rho;
  const double alpha2 = cfg.alpha * cfg.alpha;
  const double kappa = alpha2 / (rho2 + alpha2);
  const double std_dev = std::sqrt(rho2 * alpha2 / (rho2 + alpha2));
  const auto& idx = p.mask.indices();

  AuxiliaryDraw h{ImageGrid(s.x.height(), s.x.width()), s.h2, s.h3, s.h4};
  for (std::size_t i = 0; i < h.h1.size(); ++i) {
    h.h1[i] = kappa * (s.b[i] - s.x[i]) + std_dev * rng.normal();
  }
  for (std::size_t l = 0; l < h.h2.size(); ++l) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      h.h2[l][k] = kappa * (s.c[l][k] - s.d[l][idx[k]]) + complex_normal(rng, std_dev);
    }
  }
  const CoilStack fe = dft2(s.e);
  for (std::size_t l = 0; l < h.h3.size(); ++l) {
    for (std::size_t i = 0; i < h.h3[l].size(); ++i) {
      h.h3[l][i] = kappa * (s.d[l][i] - fe[l][i]) + complex_normal(rng, std_dev);
    }
  }
  const CoilStack phix = apply_phi(s.x, p.coils);
  for (std::size_t l = 0; l < h.h4.size(); ++l) {
    for (std::size_t i = 0; i < h.h4[l].size(); ++i) {
      h.h4[l][i] = kappa * (s.e[l][i] - phix[l][i]) + complex_normal(rng, std_dev);
    }
  }
  return h;
}

void gibbs_sweep(ChainState& s, const Problem& p, const SamplerConfig& cfg, Rng& rng) {
  s.x = sample_x(s, p, cfg, rng);
  s.b = sample_b(s, cfg, rng);
  s.c = sample_c(s, p, cfg, rng);
  s.d = sample_d(s, p, cfg, rng);
  s.e = sample_e(s, p, cfg, rng);
  AuxiliaryDraw h = sample_h(s, p, cfg, rng);
  s.h1 = std::move(h.h1);
  s.h2 = std::move(h.h2);
  s.h3 = std::move(h.h3);
  s.h4 = std::move(h.h4);
}

ReconResult run_chain(const Problem& problem, const SamplerConfig& cfg, const DiagnosticsSink& sink) {
  cfg.validate(problem.y);
  return run_chain(problem, cfg, initial_state(problem, cfg), sink);
}

ReconResult run_chain(const Problem& problem, const SamplerConfig& cfg, ChainState state,
                      const DiagnosticsSink& sink) {
  cfg.validate(problem.y);
  Rng rng(cfg.seed);
  const double dim = cfg.sapg.resolved_dim(state.x.size());
  RunningMoments moments(state.x.height(), state.x.width());
  ReconResult result;
  result.tau_trace.reserve(cfg.n_bi);
  result.diagnostics.reserve(cfg.n_mc);

  for (std::size_t t = 1; t <= cfg.n_mc; ++t) {
    gibbs_sweep(state, problem, cfg, rng);
    if (!state.all_finite()) {
      throw NumericalError("chain diverged: non-finite state at iteration " + std::to_string(t) +
                           " (tau=" + std::to_string(state.tau) + ")");
    }
    const double tv_x = tv_value(state.x, cfg.tv.variant);
    if (t <= cfg.n_bi) {
      if (!cfg.fix_tau) state.tau = update_tau(state.tau, tv_x, t, dim, cfg.sapg);
      result.tau_trace.push_back(state.tau);
    } else {
      moments.add(state.x);
    }
    DiagnosticsRow row{t, state.tau, tv_x, data_misfit(state.x, problem.y, problem.coils, problem.mask)};
    result.diagnostics.push_back(row);
    if (sink) sink(row);
  }

  result.mmse = moments.mean();
  result.std_map = moments.std_dev();
  result.n_used = moments.count();
  return result;
}

}  // namespace spamri
