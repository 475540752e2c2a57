#include "asax/rng.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"

using namespace asax;

TEST_CASE("splitmix64 matches the reference sequence") {
  // First output of the reference generator seeded with 0.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("streams are plain mt19937_64 engines") {
  RngStream r(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = r.next_u64();
  // The 10000th output required of every conforming mt19937_64.
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("uniform uses the top 53 bits") {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == static_cast<double>(b.next_u64() >> 11) * 0x1.0p-53);
  }
}

TEST_CASE("split is a pure function of seed and tag") {
  const RngStream root(7);
  CHECK(root.split(1).seed() == root.split(1).seed());
  CHECK(root.split(1).seed() != root.split(2).seed());
  CHECK(root.split(1).seed() == splitmix64(7 ^ splitmix64(1)));
  // Splitting does not advance the parent.
  RngStream a(7), b(7);
  (void)a.split(3);
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("below stays in range and covers it") {
  RngStream r(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(r.below(0), std::invalid_argument);
}

TEST_CASE("bernoulli frequency") {
  RngStream r(3);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3) ? 1 : 0;
  // 3 sigma of a binomial(1e5, 0.3) proportion is about 0.0043.
  CHECK(std::abs(static_cast<double>(hits) / n - 0.3) < 0.0044);
}
