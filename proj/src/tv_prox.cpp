#include "spamri/tv_prox.hpp"

#include <algorithm>
#include <cmath>

namespace spamri {

void TvConfig::validate() const {
  if (max_iters < 1) throw ConfigError("tv max_iters must be at least 1");
  if (!(tol > 0.0)) throw ConfigError("tv tolerance must be positive");
  if (!(step > 0.0 && step <= 0.25)) throw ConfigError("tv dual step must lie in (0, 0.25]");
}

double tv_value(const ImageGrid& x, TvVariant variant) {
  const std::size_t h = x.height();
  const std::size_t w = x.width();
  double total = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double gx = c + 1 < w ? x(r, c + 1) - x(r, c) : 0.0;
      const double gy = r + 1 < h ? x(r + 1, c) - x(r, c) : 0.0;
      total += variant == TvVariant::isotropic ? std::sqrt(gx * gx + gy * gy)
                                               : std::abs(gx) + std::abs(gy);
    }
  }
  return total;
}

double tv_prox_objective(const ImageGrid& u, const ImageGrid& b, double weight,
                         TvVariant variant) {
  require_same_shape(u, b, "tv_prox_objective");
  double fit = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) fit += (u[i] - b[i]) * (u[i] - b[i]);
  return weight * tv_value(u, variant) + 0.5 * fit;
}

double tv_duality_gap(const ImageGrid& b, const GradientField& dual, double weight,
                      TvVariant variant) {
  const ImageGrid d = div(dual);
  ImageGrid u(b.height(), b.width());
  double dual_obj = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    u[i] = b[i] - weight * d[i];
    bb += b[i] * b[i];
    dual_obj -= u[i] * u[i];
  }
  dual_obj = 0.5 * (bb + dual_obj);
  return tv_prox_objective(u, b, weight, variant) - dual_obj;
}

TvProxSolution tv_prox_solve(const ImageGrid& b, double weight, const TvConfig& cfg,
                             const GradientField* warm_dual) {
  cfg.validate();
  if (!(weight >= 0.0)) throw ConfigError("tv prox weight must be non-negative");
  const std::size_t h = b.height();
  const std::size_t w = b.width();
  TvProxSolution sol{b, GradientField{ImageGrid(h, w), ImageGrid(h, w)}, 0, true};
  if (weight == 0.0) return sol;
  if (warm_dual != nullptr) {
    require_same_shape(warm_dual->gx, b, "tv_prox warm start");
    sol.dual = *warm_dual;
  }

  ImageGrid& px = sol.dual.gx;
  ImageGrid& py = sol.dual.gy;
  ImageGrid v(h, w);
  const double inv_w = 1.0 / weight;
  const double s = cfg.step;
  sol.converged = false;

  for (int it = 0; it < cfg.max_iters; ++it) {
    // v = div(p) - b / weight
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        double d = 0.0;
        if (c + 1 < w) d += px(r, c);
        if (c > 0) d -= px(r, c - 1);
        if (r + 1 < h) d += py(r, c);
        if (r > 0) d -= py(r - 1, c);
        v(r, c) = d - b(r, c) * inv_w;
      }
    }
    double max_change = 0.0;
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const double gx = c + 1 < w ? v(r, c + 1) - v(r, c) : 0.0;
        const double gy = r + 1 < h ? v(r + 1, c) - v(r, c) : 0.0;
        double nx, ny;
        if (cfg.variant == TvVariant::isotropic) {
          const double denom = 1.0 + s * std::sqrt(gx * gx + gy * gy);
          nx = (px(r, c) + s * gx) / denom;
          ny = (py(r, c) + s * gy) / denom;
        } else {
          nx = (px(r, c) + s * gx) / (1.0 + s * std::abs(gx));
          ny = (py(r, c) + s * gy) / (1.0 + s * std::abs(gy));
        }
        max_change = std::max({max_change, std::abs(nx - px(r, c)), std::abs(ny - py(r, c))});
        px(r, c) = nx;
        py(r, c) = ny;
      }
    }
    sol.iterations = it + 1;
    if (max_change < cfg.tol) {
      sol.converged = true;
      break;
    }
  }

  const ImageGrid d = div(sol.dual);
  for (std::size_t i = 0; i < b.size(); ++i) sol.u[i] = b[i] - weight * d[i];
  return sol;
}

ImageGrid tv_prox(const ImageGrid& b, double weight, const TvConfig& cfg) {
  return tv_prox_solve(b, weight, cfg).u;
}

}  // namespace spamri
