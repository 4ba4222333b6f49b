#pragma once
// Seeded random streams. std::mt19937_64 output is fully specified by the
// standard; the distributions are not, so index draws are done here.

#include <cstddef>
#include <cstdint>
#include <random>

namespace hazyard {

// splitmix64 finalizer.
constexpr std::uint64_t mix_seed(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

// Independent stream seed for (master seed, run index, purpose).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index, std::uint64_t stream) {
  return mix_seed(mix_seed(mix_seed(master) ^ run_index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

enum Stream : std::uint64_t { kInstanceStream = 1, kStrategyStream = 2 };

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n); n must be > 0. Rejection sampling keeps it
  // unbiased and platform-independent.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return static_cast<std::size_t>(v % bound);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hazyard
