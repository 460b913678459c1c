// rng.hpp - counter-based random number streams for reproducible parallel
// simulation. Philox 4x32-10 (Salmon et al., SC'11): every 128-bit block is
// a pure function of (key, counter), so streams never share state.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fhp {

namespace detail {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace detail

// One 10-round Philox block.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    detail::philox_round(counter, key);
    key[0] += detail::kPhiloxW0;
    key[1] += detail::kPhiloxW1;
  }
  return counter;
}

// uniform in (0, 1], built from 53 bits so log() is always finite
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Stream of N(0,1) deviates keyed by (seed, stream, rep). The k-th draw is a
// pure function of the key and k; interleaving or reordering streams cannot
// change any value. Consumers give each (component, purpose) pair its own
// stream id.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint32_t stream, std::uint32_t rep)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        rep_(rep) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto block = philox4x32({static_cast<std::uint32_t>(block_index_),
                                   static_cast<std::uint32_t>(block_index_ >> 32), stream_, rep_},
                                  key_);
    ++block_index_;
    // Box-Muller on two 53-bit uniforms
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform_open(block[0], block[1]);
    const double u2 = uniform_open(block[2], block[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = two_pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename Vec>
  void fill(Vec& out) {
    for (decltype(out.size()) i = 0; i < out.size(); ++i) out[i] = next();
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint32_t rep_;
  std::uint64_t block_index_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fhp
