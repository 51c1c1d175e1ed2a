#include "spamri/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace spamri {

double rmse(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b, "rmse");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

double corrcoef(const ImageGrid& u, const ImageGrid& v) {
  require_same_shape(u, v, "corrcoef");
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mu;
    const double dv = v[i] - mv;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
  }
  if (!(suu > 0.0) || !(svv > 0.0)) {
    throw NumericalError("correlation coefficient undefined for a constant map");
  }
  return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

ImageGrid abs_error(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b, "abs_error");
  ImageGrid out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i] - b[i]);
  return out;
}

}  // namespace spamri
