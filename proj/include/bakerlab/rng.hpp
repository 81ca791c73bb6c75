#pragma once

#include <cmath>
#include <cstdint>

namespace bakerlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// splitmix64 generator. Statistically strong enough for the Monte Carlo
// estimates here, and cheap to fork into independent per-sample streams so
// that results do not depend on thread scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static Rng substream(uint64_t seed, uint64_t index) {
    Rng r(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    r.next();
    r.next();
    return r;
  }

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D4D049BB133111ULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  double angle() { return kTwoPi * u01(); }

  // standard Cauchy via inverse transform
  double cauchy() { return std::tan(kPi * (u01() - 0.5)); }

 private:
  uint64_t state_;
};

}  // namespace bakerlab
