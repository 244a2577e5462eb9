#pragma once

#include <cmath>
#include <cstdint>

namespace sdr {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Builds a stream identifier from up to three components so that nested
/// loops (stage, candidate, replicate, retry, ...) get decorrelated streams.
inline std::uint64_t stream_key(std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
  std::uint64_t k = detail::mix64(a);
  k = detail::mix64(k ^ (b * 0xD1B54A32D192ED03ULL));
  k = detail::mix64(k ^ (c * 0x8CB92BA72F3D8DD7ULL));
  return k;
}

/// Counter-based generator: output i of stream s is a pure function of
/// (seed, s, i). Replicates therefore draw identical values whether they run
/// serially or in parallel, which the bootstrap determinism contract needs.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(detail::mix64(detail::mix64(seed) ^
                            (stream * 0x9E3779B97F4A7C15ULL))),
        i_(0) {}

  std::uint64_t next_u64() { return detail::mix64(base_ + i_++ * 0xBF58476D1CE4E5B9ULL); }

  /// Uniform on [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  int uniform_int(int n) {
    return int((static_cast<unsigned __int128>(next_u64()) *
                static_cast<unsigned __int128>(n)) >> 64);
  }

  /// Standard normal via Box-Muller (cosine branch only, two uniforms per
  /// draw). Avoids std::normal_distribution, whose draw sequence is
  /// implementation-defined.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Chi-square with small integer dof as a sum of squared normals.
  double chi_square(int dof) {
    double s = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double z = normal();
      s += z * z;
    }
    return s;
  }

 private:
  std::uint64_t base_;
  std::uint64_t i_;
};

}  // namespace sdr
