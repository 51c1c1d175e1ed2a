#include <cmath>

#include "doctest.h"
#include "spamri/grids.hpp"
#include "support.hpp"

using namespace spamri;
using testing::brute_dft;
using testing::max_abs_diff;

TEST_CASE("grid construction enforces shape") {
  CHECK_THROWS_AS(ImageGrid(1, 4), ShapeError);
  CHECK_THROWS_AS(ImageGrid(4, 1), ShapeError);
  CHECK_THROWS_AS(ImageGrid(2, 2, std::vector<double>(3)), ShapeError);
  ImageGrid g(3, 4, 2.5);
  CHECK(g.height() == 3);
  CHECK(g.width() == 4);
  CHECK(g.size() == 12);
  CHECK(g(2, 3) == 2.5);
  g(1, 2) = 7.0;
  CHECK(g[1 * 4 + 2] == 7.0);
}

TEST_CASE("grid helpers") {
  ImageGrid a(2, 2, std::vector<double>{1, 2, 3, 4});
  ImageGrid b(2, 2, std::vector<double>{4, 3, 2, 1});
  CHECK(dot(a, b) == doctest::Approx(20.0));
  CHECK(norm2(a) == doctest::Approx(std::sqrt(30.0)));
  CHECK(all_finite(a));
  a[0] = std::nan("");
  CHECK_FALSE(all_finite(a));
  CHECK_THROWS_AS(dot(ImageGrid(2, 3), ImageGrid(3, 2)), ShapeError);

  ComplexGrid z(2, 2, Complex(1.0, -1.0));
  CHECK(norm2(z) == doctest::Approx(std::sqrt(8.0)));
  CHECK(real_dot(z, z) == doctest::Approx(8.0));
  CHECK(real_part(to_complex(b)) == b);
}

TEST_CASE("dft2 matches the direct transform") {
  Rng rng(11);
  for (auto [h, w] : {std::pair{2, 2}, {3, 5}, {8, 8}, {6, 4}, {7, 9}}) {
    const ComplexGrid x = testing::random_complex(rng, h, w);
    CHECK(max_abs_diff(dft2(x), brute_dft(x, -1)) < 1e-12);
    CHECK(max_abs_diff(idft2(x), brute_dft(x, +1)) < 1e-12);
  }
}

TEST_CASE("dft2 is unitary and idft2 inverts it") {
  Rng rng(12);
  for (std::size_t n : {8u, 16u, 33u, 64u}) {
    const ComplexGrid x = testing::random_complex(rng, n, n + 3);
    const ComplexGrid k = dft2(x);
    CHECK(std::abs(norm2(k) - norm2(x)) / norm2(x) < 1e-12);
    CHECK(max_abs_diff(idft2(k), x) / norm2(x) < 1e-12);
    const ComplexGrid y = testing::random_complex(rng, n, n + 3);
    // <F x, y> = <x, F^H y>
    CHECK(std::abs(real_dot(k, y) - real_dot(x, idft2(y))) < 1e-10);
  }
}

TEST_CASE("dft2 of a delta and of a constant") {
  ComplexGrid delta(4, 4);
  delta(0, 0) = 1.0;
  const ComplexGrid kd = dft2(delta);
  for (const Complex& v : kd.values()) CHECK(std::abs(v - Complex(0.25, 0.0)) < 1e-15);
  ComplexGrid ones(4, 4, Complex(1.0, 0.0));
  const ComplexGrid k = dft2(ones);
  CHECK(std::abs(k(0, 0) - Complex(4.0, 0.0)) < 1e-14);
  for (std::size_t i = 1; i < k.size(); ++i) CHECK(std::abs(k[i]) < 1e-14);
}

TEST_CASE("grad uses forward differences with zero last column and row") {
  ImageGrid x(3, 3, std::vector<double>{1, 2, 4, 0, 5, 5, 3, 3, 9});
  const GradientField g = grad(x);
  const ImageGrid gx_expect(3, 3, std::vector<double>{1, 2, 0, 5, 0, 0, 0, 6, 0});
  const ImageGrid gy_expect(3, 3, std::vector<double>{-1, 3, 1, 3, -2, 4, 0, 0, 0});
  CHECK(g.gx == gx_expect);
  CHECK(g.gy == gy_expect);
  const GradientField c = grad(ImageGrid(5, 4, 3.0));
  CHECK(norm2(c.gx) == 0.0);
  CHECK(norm2(c.gy) == 0.0);
}

TEST_CASE("div is the negative adjoint of grad") {
  Rng rng(13);
  for (auto [h, w] : {std::pair{2, 2}, {8, 8}, {13, 7}, {64, 64}}) {
    const ImageGrid x = testing::random_image(rng, h, w);
    const GradientField p{testing::random_image(rng, h, w), testing::random_image(rng, h, w)};
    const GradientField gx = grad(x);
    const double lhs = dot(gx.gx, p.gx) + dot(gx.gy, p.gy);
    const double rhs = -dot(x, div(p));
    CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) < 1e-12);
  }
}

TEST_CASE("div(grad x) is the Neumann five-point Laplacian") {
  Rng rng(14);
  const std::size_t h = 6, w = 5;
  const ImageGrid x = testing::random_image(rng, h, w);
  const ImageGrid lap = div(grad(x));
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double expect = 0.0;
      if (r > 0) expect += x(r - 1, c) - x(r, c);
      if (r + 1 < h) expect += x(r + 1, c) - x(r, c);
      if (c > 0) expect += x(r, c - 1) - x(r, c);
      if (c + 1 < w) expect += x(r, c + 1) - x(r, c);
      CHECK(lap(r, c) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}
