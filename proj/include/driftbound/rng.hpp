#pragma once

#include <cstdint>
#include <limits>

namespace driftbound {

// SplitMix64 finalizer (Stafford "Mix13" variant). Bijective on 64-bit words.
//
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Initial state of the substream for trajectory `index`:
//
//   derive_stream(s, i) = mix64(s + kGoldenGamma * (i + 1))   (mod 2^64)
//
// kGoldenGamma is odd, so i -> s + gamma*(i+1) is injective and mix64 is a
// bijection: distinct indices always give distinct states.
constexpr std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(master_seed + kGoldenGamma * (index + 1));
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator, but the engine
// only ever draws through uniform()/uniform_pos() so that every trajectory is
// bit-reproducible across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  constexpr double uniform_pos() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

struct RngContract {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  constexpr Rng stream() const noexcept { return Rng(derive_stream(master_seed, stream_id)); }
};

}  // namespace driftbound
