#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "spamri/forward_model.hpp"
#include "spamri/rng.hpp"

namespace testing {

using spamri::Complex;
using spamri::ComplexGrid;
using spamri::ImageGrid;

inline ImageGrid random_image(spamri::Rng& rng, std::size_t h, std::size_t w, double scale = 1.0) {
  ImageGrid g(h, w);
  for (double& v : g.values()) v = scale * rng.normal();
  return g;
}

inline ComplexGrid random_complex(spamri::Rng& rng, std::size_t h, std::size_t w) {
  ComplexGrid g(h, w);
  for (Complex& v : g.values()) {
    const double re = rng.normal();
    v = Complex(re, rng.normal());
  }
  return g;
}

inline spamri::CoilStack random_stack(spamri::Rng& rng, std::size_t coils, std::size_t h,
                                      std::size_t w) {
  spamri::CoilStack s;
  for (std::size_t l = 0; l < coils; ++l) s.push_back(random_complex(rng, h, w));
  return s;
}

inline spamri::CoilSensitivities random_coils(spamri::Rng& rng, std::size_t coils, std::size_t h,
                                              std::size_t w) {
  return spamri::CoilSensitivities(random_stack(rng, coils, h, w));
}

/// Random mask keeping each location with probability p (DC always kept).
inline spamri::SamplingMask random_mask(spamri::Rng& rng, std::size_t h, std::size_t w, double p) {
  std::vector<std::uint8_t> keep(h * w, 0);
  for (auto& k : keep) k = rng.uniform() < p ? 1 : 0;
  keep[0] = 1;
  return spamri::SamplingMask(h, w, std::move(keep));
}

inline spamri::SamplingMask full_mask(std::size_t h, std::size_t w) {
  return spamri::SamplingMask(h, w, std::vector<std::uint8_t>(h * w, 1));
}

inline double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const ComplexGrid& a, const ComplexGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Direct O(N^2) unitary DFT, the oracle for the FFT-backed transform.
inline ComplexGrid brute_dft(const ComplexGrid& x, int sign) {
  const std::size_t h = x.height(), w = x.width();
  ComplexGrid out(h, w);
  const double pi = 3.14159265358979323846;
  for (std::size_t k = 0; k < h; ++k) {
    for (std::size_t l = 0; l < w; ++l) {
      Complex acc = 0.0;
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
          const double ph = sign * 2.0 * pi *
                            (static_cast<double>(k * r % h) / static_cast<double>(h) +
                             static_cast<double>(l * c % w) / static_cast<double>(w));
          acc += x(r, c) * Complex(std::cos(ph), std::sin(ph));
        }
      }
      out(k, l) = acc / std::sqrt(static_cast<double>(h * w));
    }
  }
  return out;
}

}  // namespace testing
