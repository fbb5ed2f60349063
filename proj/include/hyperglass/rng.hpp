#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hyperglass {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
//
// The 64-bit seed is the cipher key; the 128-bit counter is split into a
// 64-bit position and a 64-bit stream id, so (seed, stream) pairs give
// independent sequences without any shared state.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (index_ == 4) {
      buffer_ = block(counter_block(position_++), key_);
      index_ = 0;
    }
    return buffer_[index_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t lo = (*this)();
    const std::uint64_t hi = (*this)();
    return (hi << 32) | lo;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  void discard(std::uint64_t z) noexcept {
    while (z > 0 && index_ < 4) {
      ++index_;
      --z;
    }
    position_ += z / 4;
    z %= 4;
    if (z > 0) {
      buffer_ = block(counter_block(position_++), key_);
      index_ = static_cast<unsigned>(z);
    }
  }

  std::uint64_t stream() const noexcept { return stream_; }

  // Ten-round Philox bijection on one 128-bit counter block.
  static Block block(Block ctr, Key key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  Block counter_block(std::uint64_t position) const noexcept {
    return {static_cast<std::uint32_t>(position), static_cast<std::uint32_t>(position >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  Block buffer_{};
  unsigned index_ = 4;
};

using Rng = Philox4x32;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Child seed for a labelled sub-task (grid cell, replica, ensemble tag).
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept {
  return splitmix64(seed ^ splitmix64(label + 0x632BE59BD9B4E019ull));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(seed, a), b);
}

}  // namespace hyperglass
