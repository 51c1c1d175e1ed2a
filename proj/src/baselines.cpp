#include "spamri/baselines.hpp"

#include <cmath>
#include <limits>

#include "spamri/metrics.hpp"

namespace spamri {

void AdmmConfig::validate() const {
  if (!(reg_weight >= 0.0)) throw ConfigError("reg_weight must be non-negative");
  if (!(penalty > 0.0)) throw ConfigError("admm penalty must be positive");
  if (max_iters < 1) throw ConfigError("admm max_iters must be at least 1");
  if (!(tol > 0.0)) throw ConfigError("admm tolerance must be positive");
  if (cg_iters < 1) throw ConfigError("admm cg_iters must be at least 1");
  tv.validate();
}

ImageGrid ifft_recon(const KSpaceData& y, const CoilSensitivities& coils, const SamplingMask& mask) {
  ImageGrid x = forward_adjoint(y, coils, mask);
  const ImageGrid& ss = coils.sum_of_squares();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] /= ss[i];
  return x;
}

double soft_threshold(double v, double threshold) {
  if (v > threshold) return v - threshold;
  if (v < -threshold) return v + threshold;
  return 0.0;
}

ImageGrid haar_forward(const ImageGrid& x) {
  const std::size_t h = x.height();
  const std::size_t w = x.width();
  if (h % 2 != 0 || w % 2 != 0) throw ShapeError("Haar transform needs even dimensions");
  const std::size_t hh = h / 2;
  const std::size_t hw = w / 2;
  ImageGrid out(h, w);
  for (std::size_t r = 0; r < hh; ++r) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double a = x(2 * r, 2 * c);
      const double b = x(2 * r, 2 * c + 1);
      const double cc = x(2 * r + 1, 2 * c);
      const double d = x(2 * r + 1, 2 * c + 1);
      out(r, c) = 0.5 * (a + b + cc + d);
      out(r, c + hw) = 0.5 * (a - b + cc - d);
      out(r + hh, c) = 0.5 * (a + b - cc - d);
      out(r + hh, c + hw) = 0.5 * (a - b - cc + d);
    }
  }
  return out;
}

ImageGrid haar_inverse(const ImageGrid& coeffs) {
  const std::size_t h = coeffs.height();
  const std::size_t w = coeffs.width();
  if (h % 2 != 0 || w % 2 != 0) throw ShapeError("Haar transform needs even dimensions");
  const std::size_t hh = h / 2;
  const std::size_t hw = w / 2;
  ImageGrid x(h, w);
  for (std::size_t r = 0; r < hh; ++r) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double ll = coeffs(r, c);
      const double lh = coeffs(r, c + hw);
      const double hl = coeffs(r + hh, c);
      const double hd = coeffs(r + hh, c + hw);
      x(2 * r, 2 * c) = 0.5 * (ll + lh + hl + hd);
      x(2 * r, 2 * c + 1) = 0.5 * (ll - lh + hl - hd);
      x(2 * r + 1, 2 * c) = 0.5 * (ll + lh - hl - hd);
      x(2 * r + 1, 2 * c + 1) = 0.5 * (ll - lh - hl + hd);
    }
  }
  return x;
}

namespace {

double regulariser(const ImageGrid& x, const AdmmConfig& cfg) {
  if (cfg.prior == AdmmPrior::tv) return tv_value(x, cfg.tv.variant);
  const ImageGrid coeffs = haar_forward(x);
  double s = 0.0;
  for (double v : coeffs.values()) s += std::abs(v);
  return s;
}

// (A^H A + penalty I) v for the real-restricted acquisition operator A.
ImageGrid normal_op(const ImageGrid& v, const CoilSensitivities& coils, const SamplingMask& mask,
                    double penalty) {
  ImageGrid out = forward_adjoint(forward(v, coils, mask), coils, mask);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += penalty * v[i];
  return out;
}

void conjugate_gradient(ImageGrid& x, const ImageGrid& rhs, const CoilSensitivities& coils,
                        const SamplingMask& mask, double penalty, int iters) {
  ImageGrid ax = normal_op(x, coils, mask, penalty);
  ImageGrid r(rhs.height(), rhs.width());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ax[i];
  ImageGrid p = r;
  double rs = dot(r, r);
  const double stop = 1e-30 * std::max(1.0, dot(rhs, rhs));
  for (int k = 0; k < iters && rs > stop; ++k) {
    const ImageGrid ap = normal_op(p, coils, mask, penalty);
    const double a = rs / dot(p, ap);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += a * p[i];
      r[i] -= a * ap[i];
    }
    const double rs_new = dot(r, r);
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
}

}  // namespace

double admm_objective(const ImageGrid& x, const KSpaceData& y, const CoilSensitivities& coils,
                      const SamplingMask& mask, const AdmmConfig& cfg) {
  return 0.5 * data_misfit(x, y, coils, mask) + cfg.reg_weight * regulariser(x, cfg);
}

AdmmResult admm_solve(const KSpaceData& y, const CoilSensitivities& coils, const SamplingMask& mask,
                      const AdmmConfig& cfg) {
  cfg.validate();
  require_compatible(y, mask);
  require_compatible(coils, mask);
  if (y.coil_count() != coils.count()) throw ShapeError("admm: coil count mismatch");

  const ImageGrid aty = forward_adjoint(y, coils, mask);
  AdmmResult res;
  res.x = ifft_recon(y, coils, mask);
  const bool tv_prior = cfg.prior == AdmmPrior::tv;
  // z and u live in the image domain for TV and in the Haar domain otherwise.
  ImageGrid z = tv_prior ? res.x : haar_forward(res.x);
  ImageGrid u(z.height(), z.width());
  GradientField dual{ImageGrid(z.height(), z.width()), ImageGrid(z.height(), z.width())};
  const double shrink = cfg.reg_weight / cfg.penalty;

  for (int it = 0; it < cfg.max_iters; ++it) {
    ImageGrid target(z.height(), z.width());
    for (std::size_t i = 0; i < z.size(); ++i) target[i] = z[i] - u[i];
    if (!tv_prior) target = haar_inverse(target);
    ImageGrid rhs = aty;
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += cfg.penalty * target[i];
    conjugate_gradient(res.x, rhs, coils, mask, cfg.penalty, cfg.cg_iters);
    if (!all_finite(res.x)) {
      throw NumericalError("admm diverged: non-finite iterate at iteration " + std::to_string(it + 1));
    }

    const ImageGrid tx = tv_prior ? res.x : haar_forward(res.x);
    ImageGrid v(z.height(), z.width());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = tx[i] + u[i];
    if (tv_prior) {
      TvProxSolution sol = tv_prox_solve(v, shrink, cfg.tv, &dual);
      z = std::move(sol.u);
      dual = std::move(sol.dual);
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) z[i] = soft_threshold(v[i], shrink);
    }
    double resid = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = tx[i] - z[i];
      u[i] += r;
      resid += r * r;
    }
    res.objective.push_back(admm_objective(res.x, y, coils, mask, cfg));
    res.iterations = it + 1;
    const double scale = std::max(norm2(res.x), std::numeric_limits<double>::min());
    if (std::sqrt(resid) / scale < cfg.tol) break;
  }
  return res;
}

ImageGrid admm_recon(const KSpaceData& y, const CoilSensitivities& coils, const SamplingMask& mask,
                     const AdmmConfig& cfg) {
  return admm_solve(y, coils, mask, cfg).x;
}

std::vector<double> default_reg_weight_grid() {
  return {1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0, 3.0, 10.0};
}

WeightSearch select_reg_weight(const KSpaceData& y, const CoilSensitivities& coils,
                               const SamplingMask& mask, const ImageGrid& truth, AdmmConfig cfg,
                               const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("reg_weight grid is empty");
  WeightSearch best;
  best.best_rmse = std::numeric_limits<double>::infinity();
  for (double w : grid) {
    cfg.reg_weight = w;
    ImageGrid x = admm_recon(y, coils, mask, cfg);
    const double e = rmse(x, truth);
    if (e < best.best_rmse) {
      best.best_rmse = e;
      best.best_weight = w;
      best.best_x = std::move(x);
    }
  }
  return best;
}

}  // namespace spamri
