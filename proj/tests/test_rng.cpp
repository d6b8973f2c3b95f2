#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tvae/error.hpp"
#include "tvae/rng.hpp"

using tvae::Rng;
using tvae::rng_stream;

namespace {

// Reference SplitMix64 (Steele, Lea, Flood), written out independently.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

std::vector<std::uint64_t> draw(Rng r, int n) {
  std::vector<std::uint64_t> v;
  for (int i = 0; i < n; ++i) v.push_back(r.next_u64());
  return v;
}

}  // namespace

TEST_SUITE("rng") {
  TEST_CASE("reference splitmix64 vector") {
    SplitMix64 s{0};
    CHECK(s.next() == 0xE220A8397B1DCDAFULL);
  }

  TEST_CASE("stream is splitmix64 from its key") {
    for (std::uint64_t seed : {0ULL, 7ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
      Rng r = rng_stream(seed, "weights");
      SplitMix64 ref{r.key()};
      for (int i = 0; i < 100; ++i) REQUIRE(r.next_u64() == ref.next());
    }
  }

  TEST_CASE("same seed and label repeat") {
    CHECK(draw(rng_stream(42, "batch"), 64) == draw(rng_stream(42, "batch"), 64));
  }

  TEST_CASE("labels and seeds separate streams") {
    CHECK(rng_stream(42, "batch").next_u64() != rng_stream(42, "weights").next_u64());
    CHECK(draw(rng_stream(42, "batch"), 16) != draw(rng_stream(43, "batch"), 16));
  }

  TEST_CASE("substreams do not depend on parent position") {
    Rng a = rng_stream(1, "train");
    Rng b = rng_stream(1, "train");
    for (int i = 0; i < 10; ++i) b.next_u64();
    CHECK(draw(a.substream("x"), 8) == draw(b.substream("x"), 8));
    CHECK(draw(a.substream("x"), 8) != draw(a.substream("y"), 8));
  }

  TEST_CASE("uniform lies in [0,1) with mean one half") {
    Rng r = rng_stream(3, "u");
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double u = r.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
  }

  TEST_CASE("uniform_index is unbiased over a small range") {
    Rng r = rng_stream(5, "idx");
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
      const auto k = r.uniform_index(7);
      REQUIRE(k < 7);
      ++counts[k];
    }
    for (int c : counts) CHECK(std::abs(c - n / 7) < 400);
    CHECK_THROWS_AS(r.uniform_index(0), tvae::ConfigError);
  }

  TEST_CASE("normal has unit variance") {
    Rng r = rng_stream(11, "n");
    double s = 0.0, s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double x = r.normal();
      s += x;
      s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.02);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
  }

  TEST_CASE("shuffle_prefix keeps a permutation") {
    Rng r = rng_stream(9, "shuffle");
    std::vector<std::size_t> pool(50);
    std::iota(pool.begin(), pool.end(), 0);
    r.shuffle_prefix(pool, 20);
    auto sorted = pool;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    CHECK_THROWS_AS(r.shuffle_prefix(pool, 51), tvae::ConfigError);
  }
}
