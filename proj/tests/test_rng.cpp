#include <cmath>
#include <set>

#include "doctest.h"
#include "spamri/rng.hpp"

using spamri::Rng;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("derived seeds are distinct per stream and per seed") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::uint64_t stream = 0; stream < 5; ++stream) {
      seen.insert(spamri::derive_seed(seed, stream));
    }
  }
  CHECK(seen.size() == 100);
  CHECK(spamri::derive_seed(7, 1) == spamri::derive_seed(7, 1));
}

TEST_CASE("uniform and uniform_index stay in range") {
  Rng rng(1);
  double sum = 0.0;
  std::size_t counts[7] = {};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    counts[rng.uniform_index(7)]++;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) - n / 7.0) < 5.0 * std::sqrt(n / 7.0));
}

TEST_CASE("normal draws have unit variance") {
  Rng rng(2);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.03));
}
