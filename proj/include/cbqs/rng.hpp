#pragma once

#include <cstdint>
#include <limits>

namespace cbqs {

// Counter-style random stream. Cheap to construct, so every sample index can
// own an independent stream; this keeps parallel and serial kernels bitwise
// identical regardless of thread count.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed = 0) : state_(seed) {}

  // Stream for the `index`-th child of `seed` (used for per-sample streams).
  static Stream derive(std::uint64_t seed, std::uint64_t index) {
    Stream s(seed ^ mix(index + 0x632be59bd9b4e019ULL));
    s.state_ = mix(s.state_);
    return s;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's multiply-shift; bias is below 2^-64 * bound.
    const unsigned __int128 m =
        static_cast<unsigned __int128>((*this)()) * bound;
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace cbqs
