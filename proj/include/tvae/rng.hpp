#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace tvae {

// Counter-based generator: output i is a bijective mix of (key + i * golden).
// The key is derived from (seed, label), so every consumer gets its own stream
// and streams do not depend on the order in which they are created.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::string_view label);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal via Box-Muller (consumes two draws per call).
  double normal();

  // Partial Fisher-Yates over `pool`: afterwards the first k entries are a
  // uniform sample without replacement from the pool contents.
  void shuffle_prefix(std::span<std::size_t> pool, std::size_t k);

  // Child stream keyed on this stream's key and `label`.
  Rng substream(std::string_view label) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  Rng(std::uint64_t key, std::uint64_t counter, int) : key_(key), counter_(counter) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

Rng rng_stream(std::uint64_t seed, std::string_view label);

}  // namespace tvae
