#include "spamri/grids.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace spamri {

bool all_finite(const ImageGrid& g) {
  for (double v : g.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool all_finite(const ComplexGrid& g) {
  for (const Complex& v : g.values()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

double dot(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const ImageGrid& a) { return std::sqrt(dot(a, a)); }

double norm2(const ComplexGrid& a) {
  double s = 0.0;
  for (const Complex& v : a.values()) s += std::norm(v);
  return std::sqrt(s);
}

double real_dot(const ComplexGrid& a, const ComplexGrid& b) {
  require_same_shape(a, b, "real_dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return s;
}

ComplexGrid to_complex(const ImageGrid& g) {
  ComplexGrid out(g.height(), g.width());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = Complex(g[i], 0.0);
  return out;
}

ImageGrid real_part(const ComplexGrid& g) {
  ImageGrid out(g.height(), g.width());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
  return out;
}

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

// FFTW planning is not thread-safe; execution of an existing plan on
// distinct arrays is. Plans are created once per (shape, direction) under a
// lock and always executed on fftw_malloc'd buffers so the alignment the
// plan was made for holds, which keeps results bit-identical across calls.
class PlanCache {
 public:
  fftw_plan get(std::size_t h, std::size_t w, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(h, w, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    FftwBuffer in(h * w);
    FftwBuffer out(h * w);
    fftw_plan p = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), in.ptr, out.ptr,
                                   sign, FFTW_ESTIMATE);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

ComplexGrid unitary_transform(const ComplexGrid& src, int sign) {
  const std::size_t h = src.height();
  const std::size_t w = src.width();
  const std::size_t n = h * w;
  fftw_plan plan = plan_cache().get(h, w, sign);
  FftwBuffer in(n);
  FftwBuffer out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.ptr[i][0] = src[i].real();
    in.ptr[i][1] = src[i].imag();
  }
  fftw_execute_dft(plan, in.ptr, out.ptr);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexGrid dst(h, w);
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = Complex(out.ptr[i][0] * scale, out.ptr[i][1] * scale);
  }
  return dst;
}

}  // namespace

ComplexGrid dft2(const ComplexGrid& img) { return unitary_transform(img, FFTW_FORWARD); }

ComplexGrid idft2(const ComplexGrid& spectrum) {
  return unitary_transform(spectrum, FFTW_BACKWARD);
}

GradientField grad(const ImageGrid& img) {
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  GradientField g{ImageGrid(h, w), ImageGrid(h, w)};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (c + 1 < w) g.gx(r, c) = img(r, c + 1) - img(r, c);
      if (r + 1 < h) g.gy(r, c) = img(r + 1, c) - img(r, c);
    }
  }
  return g;
}

ImageGrid div(const GradientField& field) {
  require_same_shape(field.gx, field.gy, "div");
  const std::size_t h = field.gx.height();
  const std::size_t w = field.gx.width();
  ImageGrid out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double v = 0.0;
      if (c + 1 < w) v += field.gx(r, c);
      if (c > 0) v -= field.gx(r, c - 1);
      if (r + 1 < h) v += field.gy(r, c);
      if (r > 0) v -= field.gy(r - 1, c);
      out(r, c) = v;
    }
  }
  return out;
}

}  // namespace spamri
