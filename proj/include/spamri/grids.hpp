#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "spamri/errors.hpp"

namespace spamri {

using Complex = std::complex<double>;

/// Dense row-major H x W array. Both dimensions must be at least 2.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {
    if (height < 2 || width < 2) {
      throw ShapeError("grid dimensions must be at least 2x2");
    }
  }
  Grid(std::size_t height, std::size_t width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (height < 2 || width < 2) {
      throw ShapeError("grid dimensions must be at least 2x2");
    }
    if (data_.size() != height * width) {
      throw ShapeError("grid data length does not match height*width");
    }
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  template <class U>
  bool same_shape(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Grid& a, const Grid& b) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using ImageGrid = Grid<double>;
using ComplexGrid = Grid<Complex>;

/// One complex plane per receiver coil, all with the same shape.
using CoilStack = std::vector<ComplexGrid>;

/// Forward differences of an image. Under the Neumann rule the last column
/// of gx and the last row of gy are zero.
struct GradientField {
  ImageGrid gx;
  ImageGrid gy;
};

template <class T, class U>
void require_same_shape(const Grid<T>& a, const Grid<U>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": grid shapes differ");
  }
}

bool all_finite(const ImageGrid& g);
bool all_finite(const ComplexGrid& g);

double dot(const ImageGrid& a, const ImageGrid& b);
double norm2(const ImageGrid& a);
double norm2(const ComplexGrid& a);
/// Real part of sum(conj(a) * b).
double real_dot(const ComplexGrid& a, const ComplexGrid& b);

ComplexGrid to_complex(const ImageGrid& g);
ImageGrid real_part(const ComplexGrid& g);

/// Unitary 2-D DFT (1/sqrt(HW) scaling), DC at index (0,0).
ComplexGrid dft2(const ComplexGrid& img);
/// Inverse and adjoint of dft2.
ComplexGrid idft2(const ComplexGrid& spectrum);

GradientField grad(const ImageGrid& img);
/// Negative adjoint of grad: <grad x, p> = -<x, div p>.
ImageGrid div(const GradientField& field);

}  // namespace spamri
