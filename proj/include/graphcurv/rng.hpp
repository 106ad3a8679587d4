#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace graphcurv {

// Counter-based generator: every draw is a pure function of (seed, stream
// tags, counter), so independent work items can own disjoint streams and the
// results do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
    key_ = mix(seed ^ 0x7380'9fd3'41c2'11e5ULL);
    for (std::uint64_t t : tags) key_ = mix(key_ ^ mix(t + 0x9e37'79b9'7f4a'7c15ULL));
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e37'79b9'7f4a'7c15ULL;
    return mix(key_ + counter_);
  }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive on both ends
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double lognormal(double sigma = 1.0) { return std::exp(sigma * normal()); }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58'476d'1ce4'e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d0'49bb'1331'11ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace graphcurv
