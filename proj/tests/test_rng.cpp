#include <cmath>
#include <vector>

#include "almab/rng.hpp"
#include "doctest.h"

using almab::Rng;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("split streams are independent of parent advancement") {
  Rng parent(7);
  Rng child_before = parent.split(3);
  parent.uniform();
  parent.normal();
  Rng child_after = parent.split(3);
  for (int i = 0; i < 100; ++i) {
    CHECK(child_before.next_u64() == child_after.next_u64());
  }
  Rng other = parent.split(4);
  CHECK(other.next_u64() != parent.split(3).next_u64());
}

TEST_CASE("uniform stays in [0,1) with sane mean") {
  Rng rng(1);
  double total = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    total += u;
  }
  CHECK(std::abs(total / n - 0.5) < 0.005);
}

TEST_CASE("normal has unit moments") {
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("uniform_int covers inclusive bounds uniformly") {
  Rng rng(3);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.uniform_int(2, 6);
    REQUIRE(v >= 2);
    REQUIRE(v <= 6);
    counts[static_cast<std::size_t>(v - 2)]++;
  }
  for (int c : counts) {
    CHECK(std::abs(c - n / 5) < 500);  // ~5 sigma
  }
  CHECK(rng.uniform_int(4, 4) == 4);
  CHECK_THROWS_AS((void)rng.uniform_int(3, 2), almab::InputError);
}

TEST_CASE("degenerate uniform_int consumes no state") {
  Rng a(9), b(9);
  (void)a.uniform_int(5, 5);
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("beta matches its mean for integer counts") {
  Rng rng(4);
  double total = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) total += rng.beta(8.0, 2.0);
  CHECK(std::abs(total / n - 0.8) < 0.01);
}
