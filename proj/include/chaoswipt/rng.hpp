#pragma once

// Counter-based random streams.
//
// Every Monte Carlo trial owns a Philox4x32-10 generator keyed by the master
// seed, with the trial index in the upper half of the counter. The stream a
// trial sees is therefore a pure function of (master_seed, trial_index), which
// keeps results independent of how trials are scheduled onto threads.

#include <array>
#include <cstdint>
#include <limits>

namespace chaoswipt {

class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (next_ == 2) {
      refill();
    }
    return buffer_[next_++];
  }

  /// Discards `n` 64-bit outputs.
  void discard(std::uint64_t n) noexcept {
    while (n-- > 0) {
      (*this)();
    }
  }

  /// One Philox4x32-10 block; exposed for known-answer tests.
  static constexpr Block bijection(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  void refill() noexcept {
    const Block out = bijection(counter_, key_);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    next_ = 0;
    if (++counter_[0] == 0) {
      ++counter_[1];
    }
  }

  Key key_;
  Block counter_;
  std::array<result_type, 2> buffer_{};
  unsigned next_ = 2;
};

/// Stream for one trial: a pure function of (master_seed, trial_index).
inline Philox4x32 trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  return Philox4x32(master_seed, trial_index);
}

/// SplitMix64 finalizer, used to derive child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Philox4x32& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace chaoswipt
