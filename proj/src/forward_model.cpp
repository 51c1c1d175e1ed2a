#include "spamri/forward_model.hpp"

#include <cmath>

#include "spamri/rng.hpp"

namespace spamri {

SamplingMask::SamplingMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> keep)
    : height_(height), width_(width), keep_(std::move(keep)) {
  if (height < 2 || width < 2) throw ShapeError("mask dimensions must be at least 2x2");
  if (keep_.size() != height * width) throw ShapeError("mask length does not match height*width");
  for (std::size_t i = 0; i < keep_.size(); ++i) {
    if (keep_[i] != 0) {
      keep_[i] = 1;
      indices_.push_back(i);
    }
  }
  if (indices_.empty()) throw ConfigError("sampling mask keeps no locations");
}

CoilSensitivities::CoilSensitivities(std::vector<ComplexGrid> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw ConfigError("at least one coil is required");
  for (const auto& m : maps_) {
    require_same_shape(m, maps_.front(), "coil sensitivities");
    if (!all_finite(m)) throw NumericalError("coil sensitivities contain non-finite values");
  }
  sum_sq_ = ImageGrid(maps_.front().height(), maps_.front().width());
  for (const auto& m : maps_) {
    for (std::size_t i = 0; i < m.size(); ++i) sum_sq_[i] += std::norm(m[i]);
  }
  for (double v : sum_sq_.values()) {
    if (!(v > 0.0)) throw ConfigError("coil sensitivities vanish at some pixel");
  }
}

void require_compatible(const CoilSensitivities& coils, const SamplingMask& mask) {
  if (coils.height() != mask.height() || coils.width() != mask.width()) {
    throw ShapeError("coil maps and sampling mask have different shapes");
  }
}

void require_compatible(const KSpaceData& y, const SamplingMask& mask) {
  if (y.height != mask.height() || y.width != mask.width()) {
    throw ShapeError("k-space data and sampling mask have different shapes");
  }
  if (y.locations != mask.indices()) {
    throw ShapeError("k-space sample locations do not match the sampling mask");
  }
  for (const auto& coil : y.coils) {
    if (coil.size() != mask.count()) {
      throw ShapeError("per-coil sample count differs from mask count");
    }
  }
}

CoilStack apply_phi(const ImageGrid& x, const CoilSensitivities& coils) {
  if (x.height() != coils.height() || x.width() != coils.width()) {
    throw ShapeError("apply_phi: image and coil maps have different shapes");
  }
  CoilStack out;
  out.reserve(coils.count());
  for (const auto& phi : coils.maps()) {
    ComplexGrid plane(x.height(), x.width());
    for (std::size_t i = 0; i < x.size(); ++i) plane[i] = phi[i] * x[i];
    out.push_back(std::move(plane));
  }
  return out;
}

ImageGrid apply_phi_adjoint(const CoilStack& e, const CoilSensitivities& coils) {
  if (e.size() != coils.count()) throw ShapeError("apply_phi_adjoint: coil count mismatch");
  ImageGrid out(coils.height(), coils.width());
  for (std::size_t l = 0; l < e.size(); ++l) {
    require_same_shape(e[l], coils[l], "apply_phi_adjoint");
    const ComplexGrid& phi = coils[l];
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += phi[i].real() * e[l][i].real() + phi[i].imag() * e[l][i].imag();
    }
  }
  return out;
}

KSpaceData apply_mask(const CoilStack& d, const SamplingMask& mask) {
  KSpaceData y;
  y.height = mask.height();
  y.width = mask.width();
  y.locations = mask.indices();
  y.coils.reserve(d.size());
  for (const auto& plane : d) {
    if (plane.height() != mask.height() || plane.width() != mask.width()) {
      throw ShapeError("apply_mask: plane and mask have different shapes");
    }
    std::vector<Complex> samples;
    samples.reserve(mask.count());
    for (std::size_t idx : mask.indices()) samples.push_back(plane[idx]);
    y.coils.push_back(std::move(samples));
  }
  return y;
}

CoilStack mask_adjoint(const KSpaceData& y, const SamplingMask& mask) {
  require_compatible(y, mask);
  CoilStack out;
  out.reserve(y.coils.size());
  for (const auto& samples : y.coils) {
    ComplexGrid plane(mask.height(), mask.width());
    for (std::size_t k = 0; k < samples.size(); ++k) plane[mask.indices()[k]] = samples[k];
    out.push_back(std::move(plane));
  }
  return out;
}

CoilStack dft2(const CoilStack& planes) {
  CoilStack out;
  out.reserve(planes.size());
  for (const auto& p : planes) out.push_back(dft2(p));
  return out;
}

CoilStack idft2(const CoilStack& planes) {
  CoilStack out;
  out.reserve(planes.size());
  for (const auto& p : planes) out.push_back(idft2(p));
  return out;
}

KSpaceData forward(const ImageGrid& x, const CoilSensitivities& coils, const SamplingMask& mask) {
  require_compatible(coils, mask);
  return apply_mask(dft2(apply_phi(x, coils)), mask);
}

ImageGrid forward_adjoint(const KSpaceData& y, const CoilSensitivities& coils,
                          const SamplingMask& mask) {
  require_compatible(coils, mask);
  return apply_phi_adjoint(idft2(mask_adjoint(y, mask)), coils);
}

double data_misfit(const ImageGrid& x, const KSpaceData& y, const CoilSensitivities& coils,
                   const SamplingMask& mask) {
  require_compatible(y, mask);
  if (y.coil_count() != coils.count()) throw ShapeError("data_misfit: coil count mismatch");
  const KSpaceData model = forward(x, coils, mask);
  double s = 0.0;
  for (std::size_t l = 0; l < y.coils.size(); ++l) {
    for (std::size_t k = 0; k < y.coils[l].size(); ++k) {
      s += std::norm(y.coils[l][k] - model.coils[l][k]);
    }
  }
  return s;
}

KSpaceData simulate(const ImageGrid& x, const CoilSensitivities& coils, const SamplingMask& mask,
                    double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("noise standard deviation must be finite and non-negative");
  }
  KSpaceData y = forward(x, coils, mask);
  y.sigma = sigma;
  if (sigma == 0.0) return y;
  Rng rng(seed);
  for (auto& samples : y.coils) {
    for (auto& v : samples) {
      const double re = rng.normal();
      const double im = rng.normal();
      v += Complex(sigma * re, sigma * im);
    }
  }
  return y;
}

}  // namespace spamri
