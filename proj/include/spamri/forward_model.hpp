#pragma once

#include <cstdint>
#include <vector>

#include "spamri/grids.hpp"

namespace spamri {

/// Binary k-space sampling pattern in DFT layout (DC at (0,0)). Defines the
/// selection operator S; kept locations are enumerated in row-major order.
class SamplingMask {
 public:
  SamplingMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> keep);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return keep_.size(); }
  std::size_t count() const { return indices_.size(); }
  bool kept(std::size_t linear_index) const { return keep_[linear_index] != 0; }
  const std::vector<std::uint8_t>& keep() const { return keep_; }
  /// Row-major linear indices of kept locations.
  const std::vector<std::size_t>& indices() const { return indices_; }

  friend bool operator==(const SamplingMask& a, const SamplingMask& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.keep_ == b.keep_;
  }

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> keep_;
  std::vector<std::size_t> indices_;
};

/// Complex receiver sensitivities, one map per coil. Every pixel must be
/// seen by at least one coil.
class CoilSensitivities {
 public:
  explicit CoilSensitivities(std::vector<ComplexGrid> maps);

  std::size_t count() const { return maps_.size(); }
  std::size_t height() const { return maps_.front().height(); }
  std::size_t width() const { return maps_.front().width(); }
  const ComplexGrid& operator[](std::size_t coil) const { return maps_[coil]; }
  const std::vector<ComplexGrid>& maps() const { return maps_; }
  /// Per-pixel sum over coils of |phi|^2, the diagonal of Phi^H Phi.
  const ImageGrid& sum_of_squares() const { return sum_sq_; }

 private:
  std::vector<ComplexGrid> maps_;
  ImageGrid sum_sq_;
};

/// Per-coil values at the kept mask locations (the compact form of S applied
/// to a coil stack). `locations` mirrors the mask's kept indices.
struct KSpaceData {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::size_t> locations;
  std::vector<std::vector<Complex>> coils;
  /// Noise standard deviation of each real and imaginary component.
  double sigma = 0.0;

  std::size_t coil_count() const { return coils.size(); }
};

void require_compatible(const CoilSensitivities& coils, const SamplingMask& mask);
void require_compatible(const KSpaceData& y, const SamplingMask& mask);

CoilStack apply_phi(const ImageGrid& x, const CoilSensitivities& coils);
/// Re(sum_l conj(phi_l) e_l): the adjoint of Phi restricted to real images.
ImageGrid apply_phi_adjoint(const CoilStack& e, const CoilSensitivities& coils);

KSpaceData apply_mask(const CoilStack& d, const SamplingMask& mask);
/// Zero-filling embed S^T.
CoilStack mask_adjoint(const KSpaceData& y, const SamplingMask& mask);

CoilStack dft2(const CoilStack& planes);
CoilStack idft2(const CoilStack& planes);

/// S F Phi x.
KSpaceData forward(const ImageGrid& x, const CoilSensitivities& coils, const SamplingMask& mask);
/// Re(Phi^H F^H S^T y).
ImageGrid forward_adjoint(const KSpaceData& y, const CoilSensitivities& coils,
                          const SamplingMask& mask);

/// Squared residual norm ||y - S F Phi x||^2 over all coils.
double data_misfit(const ImageGrid& x, const KSpaceData& y, const CoilSensitivities& coils,
                   const SamplingMask& mask);

/// y = S F Phi x + w with w having independent N(0, sigma^2) real and
/// imaginary parts at every kept location.
KSpaceData simulate(const ImageGrid& x, const CoilSensitivities& coils, const SamplingMask& mask,
                    double sigma, std::uint64_t seed);

}  // namespace spamri
