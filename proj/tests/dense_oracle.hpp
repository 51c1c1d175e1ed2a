#pragma once

// Dense Gaussian model of the augmented density with the TV term switched off
// (tau = 0). Every variable is laid out as a real vector
//   [x | b | c | d | e | h1 | h2 | h3 | h4]
// with complex entries stored as (re, im) pairs, coil-major. The operators are
// built as explicit real matrices from their definitions, so nothing here
// calls the library transforms.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "spamri/sampler.hpp"

namespace testing {

struct DenseModel {
  std::size_t n = 0;  // pixels
  std::size_t m = 0;  // kept k-space locations
  std::size_t coils = 0;
  std::size_t off_x = 0, off_b = 0, off_c = 0, off_d = 0, off_e = 0;
  std::size_t off_h1 = 0, off_h2 = 0, off_h3 = 0, off_h4 = 0, dim = 0;
  Eigen::MatrixXd precision;
  Eigen::VectorXd linear;  // the mean solves precision * mu = linear

  Eigen::VectorXd mean() const { return precision.ldlt().solve(linear); }
  Eigen::MatrixXd covariance() const {
    return precision.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
  }
};

/// Real 2n x 2n matrix of the unitary forward DFT on interleaved (re, im).
inline Eigen::MatrixXd dense_dft(std::size_t h, std::size_t w) {
  const std::size_t n = h * w;
  const double pi = 3.14159265358979323846;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (std::size_t k = 0; k < h; ++k) {
    for (std::size_t l = 0; l < w; ++l) {
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
          const double ph = -2.0 * pi *
                            (static_cast<double>(k * r) / static_cast<double>(h) +
                             static_cast<double>(l * c) / static_cast<double>(w));
          const double re = scale * std::cos(ph), im = scale * std::sin(ph);
          const std::size_t row = 2 * (k * w + l), col = 2 * (r * w + c);
          f(row, col) = re;
          f(row, col + 1) = -im;
          f(row + 1, col) = im;
          f(row + 1, col + 1) = re;
        }
      }
    }
  }
  return f;
}

inline DenseModel dense_model(const spamri::Problem& p, double rho, double alpha, double sigma) {
  DenseModel dm;
  dm.n = p.mask.size();
  dm.m = p.mask.count();
  dm.coils = p.coils.count();
  const std::size_t n = dm.n, m = dm.m, L = dm.coils;
  dm.off_x = 0;
  dm.off_b = n;
  dm.off_c = 2 * n;
  dm.off_d = dm.off_c + 2 * L * m;
  dm.off_e = dm.off_d + 2 * L * n;
  dm.off_h1 = dm.off_e + 2 * L * n;
  dm.off_h2 = dm.off_h1 + n;
  dm.off_h3 = dm.off_h2 + 2 * L * m;
  dm.off_h4 = dm.off_h3 + 2 * L * n;
  dm.dim = dm.off_h4 + 2 * L * n;
  dm.precision = Eigen::MatrixXd::Zero(dm.dim, dm.dim);
  dm.linear = Eigen::VectorXd::Zero(dm.dim);

  // Adds ||A z - r||^2 / (2 v) to the energy.
  auto add_term = [&](const Eigen::MatrixXd& a, const Eigen::VectorXd& r, double v) {
    dm.precision += a.transpose() * a / v;
    dm.linear += a.transpose() * r / v;
  };
  const Eigen::MatrixXd f = dense_dft(p.height(), p.width());
  const auto& idx = p.mask.indices();
  const double rho2 = rho * rho;

  // data fidelity on c
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, dm.dim);
    Eigen::VectorXd r(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
      a(2 * k, dm.off_c + 2 * (l * m + k)) = 1.0;
      a(2 * k + 1, dm.off_c + 2 * (l * m + k) + 1) = 1.0;
      r(2 * k) = p.y.coils[l][k].real();
      r(2 * k + 1) = p.y.coils[l][k].imag();
    }
    add_term(a, r, sigma * sigma);
  }
  // x + h1 - b
  {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, dm.dim);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, dm.off_x + i) = 1.0;
      a(i, dm.off_h1 + i) = 1.0;
      a(i, dm.off_b + i) = -1.0;
    }
    add_term(a, Eigen::VectorXd::Zero(n), rho2);
  }
  for (std::size_t l = 0; l < L; ++l) {
    // c - S d - h2
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, dm.dim);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t part = 0; part < 2; ++part) {
        a(2 * k + part, dm.off_c + 2 * (l * m + k) + part) = 1.0;
        a(2 * k + part, dm.off_d + 2 * (l * n + idx[k]) + part) = -1.0;
        a(2 * k + part, dm.off_h2 + 2 * (l * m + k) + part) = -1.0;
      }
    }
    add_term(a, Eigen::VectorXd::Zero(2 * m), rho2);
    // d - F e - h3
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * n, dm.dim);
    b.block(0, dm.off_d + 2 * l * n, 2 * n, 2 * n) = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    b.block(0, dm.off_e + 2 * l * n, 2 * n, 2 * n) = -f;
    b.block(0, dm.off_h3 + 2 * l * n, 2 * n, 2 * n) = -Eigen::MatrixXd::Identity(2 * n, 2 * n);
    add_term(b, Eigen::VectorXd::Zero(2 * n), rho2);
    // e - Phi x - h4
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * n, dm.dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t part = 0; part < 2; ++part) {
        c(2 * i + part, dm.off_e + 2 * (l * n + i) + part) = 1.0;
        c(2 * i + part, dm.off_h4 + 2 * (l * n + i) + part) = -1.0;
      }
      c(2 * i, dm.off_x + i) = -p.coils[l][i].real();
      c(2 * i + 1, dm.off_x + i) = -p.coils[l][i].imag();
    }
    add_term(c, Eigen::VectorXd::Zero(2 * n), rho2);
  }
  // Gaussian prior on h1..h4
  for (std::size_t i = dm.off_h1; i < dm.dim; ++i) dm.precision(i, i) += 1.0 / (alpha * alpha);
  return dm;
}

inline void put(Eigen::VectorXd& z, std::size_t& at, spamri::Complex v) {
  z(at++) = v.real();
  z(at++) = v.imag();
}

inline Eigen::VectorXd pack(const DenseModel& dm, const spamri::ChainState& s) {
  Eigen::VectorXd z(dm.dim);
  std::size_t at = 0;
  for (double v : s.x.values()) z(at++) = v;
  for (double v : s.b.values()) z(at++) = v;
  for (const auto& c : s.c) {
    for (const auto& v : c) put(z, at, v);
  }
  for (const auto& g : s.d) {
    for (const auto& v : g.values()) put(z, at, v);
  }
  for (const auto& g : s.e) {
    for (const auto& v : g.values()) put(z, at, v);
  }
  for (double v : s.h1.values()) z(at++) = v;
  for (const auto& c : s.h2) {
    for (const auto& v : c) put(z, at, v);
  }
  for (const auto& g : s.h3) {
    for (const auto& v : g.values()) put(z, at, v);
  }
  for (const auto& g : s.h4) {
    for (const auto& v : g.values()) put(z, at, v);
  }
  return z;
}

/// Conditional mean and covariance of z[first, first+len) given the rest.
struct Conditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

inline Conditional conditional(const DenseModel& dm, const Eigen::VectorXd& z, std::size_t first,
                               std::size_t len) {
  const Eigen::MatrixXd qbb = dm.precision.block(first, first, len, len);
  const Eigen::VectorXd grad = dm.precision * z - dm.linear;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(qbb);
  Conditional out;
  out.mean = z.segment(first, len) - ldlt.solve(grad.segment(first, len));
  out.cov = ldlt.solve(Eigen::MatrixXd::Identity(len, len));
  return out;
}

}  // namespace testing
