#ifndef MORAN_RNG_HPP
#define MORAN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace moran {

// SplitMix64 finalizer (Vigna's fixed-increment variant of Steele et al.'s
// splittable generator). Used both as a counter-based stream and as the
// split/key-derivation mix.
inline uint64_t splitmix_mix(uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

/// Counter-based generator: output i of stream `key` is mix(key + i*gamma).
/// Replays bit-identically from (key, counter); streams split by re-keying.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(splitmix_mix(seed + UINT64_C(0x9E3779B97F4A7C15) * (stream + 1)) ^ seed),
        ctr_(0) {}

  CounterRng split(uint64_t stream) const { return CounterRng(key_, stream + 1); }

  uint64_t next_u64() {
    ctr_ += UINT64_C(0x9E3779B97F4A7C15);
    return splitmix_mix(key_ + ctr_);
  }

  /// Uniform on [0,1) with 53 bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe as a log() argument.
  double next_open_double() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) via Lemire's multiply-shift.
  uint32_t next_below(uint32_t bound) {
    uint64_t r = next_u64() & 0xFFFFFFFFu;
    return uint32_t((r * bound) >> 32);
  }

  double next_exp(double rate) { return -std::log(next_open_double()) / rate; }

  double next_normal() {
    // Box-Muller, one value per call (cache the pair).
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_open_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t key_;
  uint64_t ctr_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace moran

#endif
