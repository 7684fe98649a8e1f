#pragma once

#include <cstdint>
#include <random>

namespace lsf {

__extension__ using u128 = unsigned __int128;

// Seedable random stream. Draws are mapped to doubles and bounded integers
// by hand so sequences are identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) { reseed(0, 0); }

  // Independent child stream, e.g. one per join index or per search trial.
  // The child depends only on (seed, tag, index), never on draws already
  // taken from this stream.
  Rng fork(std::uint64_t tag, std::uint64_t index) const {
    return Rng(seed_, tag, index);
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = engine_();
    u128 product = static_cast<u128>(x) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = engine_();
        product = static_cast<u128>(x) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  Rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index)
      : seed_(seed) {
    reseed(tag + 1, index);
  }

  // Derived streams are seeded from a SplitMix64 mix of (seed, tag, index);
  // std::mt19937_64 seeding from a single word is fully specified.
  void reseed(std::uint64_t tag, std::uint64_t index) {
    std::uint64_t h = mix(seed_ ^ 0x6a09e667f3bcc909ULL);
    h = mix(h ^ tag);
    h = mix(h ^ index);
    engine_.seed(h);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stream tags. Keeping them distinct means adding a consumer never shifts
// another consumer's draws.
namespace stream {
inline constexpr std::uint64_t join = 1;
inline constexpr std::uint64_t search_trial = 2;
inline constexpr std::uint64_t placement = 3;
inline constexpr std::uint64_t budget_trial = 4;
inline constexpr std::uint64_t accounting = 5;
}  // namespace stream

}  // namespace lsf
