#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <limits>

namespace condgof {

/// Anything that hands out doubles in [0, 1). The conditional samplers only
/// need this, which lets tests drive them with scripted or counting sources.
template <typename R>
concept UniformSource = requires(R& r) {
  { r.uniform() } -> std::convertible_to<double>;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** keyed by a (seed, stream id) pair.
///
/// The four state words are derived by running splitmix64 over a key that
/// mixes both halves, so every (seed, stream) pair gives an independent,
/// reproducible sequence. Parallel code derives one stream per work item,
/// which makes results independent of how items are scheduled.
///
/// Satisfies std::uniform_random_bit_generator, so it plugs into the
/// <random> distributions as well.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {
    std::uint64_t key = seed;
    std::uint64_t mixed = splitmix64(key);
    std::uint64_t sk = stream ^ 0x6a09e667f3bcc909ULL;
    key = mixed ^ splitmix64(sk);
    for (auto& w : s_) w = splitmix64(key);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// 53-bit uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Child stream `id` of this stream's key; does not advance this stream.
  RandomStream split(std::uint64_t id) const noexcept {
    std::uint64_t k = stream_;
    return RandomStream(seed_ ^ splitmix64(k), id);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace condgof
