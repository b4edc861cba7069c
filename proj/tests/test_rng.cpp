#include <cmath>
#include <vector>

#include "doctest.h"

#include "binembed/rng.hpp"

using namespace binembed;

TEST_CASE("same seed and stream reproduce the sequence") {
  Rng a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.u64() == b.u64());
}

TEST_CASE("different streams of one seed diverge") {
  Rng a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.u64() == b.u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("gaussian moments") {
  Rng rng(123);
  const int n = 200000;
  double sum = 0, sum2 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
    sum4 += g * g * g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);            // mean 0, SE ~ 0.0022
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);     // variance 1
  CHECK(std::abs(sum4 / n - 3.0) < 0.1);      // kurtosis of a normal
}

TEST_CASE("below is in range and roughly uniform") {
  Rng rng(9);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto v = rng.below(10);
    REQUIRE(v < 10);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("permutation is a permutation") {
  Rng rng(5);
  const auto perm = rng.permutation(257);
  std::vector<bool> seen(257, false);
  for (auto v : perm) {
    REQUIRE(v < 257);
    REQUIRE(!seen[v]);
    seen[v] = true;
  }
}
