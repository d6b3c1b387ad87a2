#include <doctest.h>

#include <cmath>
#include <vector>

#include "relibench/rng.hpp"

using relibench::RngStream;

TEST_CASE("identical (seed, stream) reproduces the draw sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream ids give different sequences") {
  RngStream a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform01 stays in [0,1) and is roughly uniform") {
  RngStream rng(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::fabs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform_index covers the range without bias") {
  RngStream rng(9, 3);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_index(10)];
  for (const int c : counts) CHECK(std::fabs(c / static_cast<double>(n) - 0.1) < 0.01);
  CHECK_THROWS_AS(rng.uniform_index(0), relibench::ParameterError);
}

TEST_CASE("normal draws match the first two moments") {
  RngStream rng(5, 11);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(var - 1.0) < 0.02);
}
