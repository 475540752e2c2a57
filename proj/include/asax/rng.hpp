#pragma once

#include <cstdint>
#include <random>

namespace asax {

// SplitMix64 finalizer. Used only to derive seeds, never as a draw source.
std::uint64_t splitmix64(std::uint64_t x);

// The project's random stream family.
//
// Every stream is a std::mt19937_64 engine. A child stream is seeded with
// splitmix64(parent_seed ^ splitmix64(tag)), so the tree of streams is a pure
// function of the root seed and the tags used along the way. Uniform doubles
// are formed from the top 53 bits of one engine output, which keeps draws
// identical across standard library implementations (std::uniform_*
// distributions are implementation-defined and are not used).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  RngStream split(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace asax
