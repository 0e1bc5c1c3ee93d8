#pragma once

#include <cmath>
#include <cstdint>

namespace lorentz {

// splitmix64: tiny, seed-deterministic across platforms.  The standard
// <random> distributions are implementation-defined, which would break the
// byte-identical rerun guarantees, so randomized search paths use this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // standard normal via Box-Muller
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // derive an independent stream for a sub-task; stable under reordering
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0xA0761D6478BD642Full + stream * 0xE7037ED1A0B428DBull));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace lorentz
