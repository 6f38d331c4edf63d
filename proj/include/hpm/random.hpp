#pragma once

#include <cstdint>
#include <random>

namespace hpm {

// splitmix64 mixing step (Steele, Lea, Flood 2014).
uint64_t splitmix64(uint64_t x);

// Sub-seed for trial i under a master seed: master ^ splitmix64(i).
uint64_t derive_seed(uint64_t master_seed, uint64_t trial_index);

/// Seedable generator used by everything in problem_gen. The stream is
/// mt19937_64; normals come from Box-Muller on 53-bit uniforms, so traces
/// reproduce exactly across builds of this implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // standard normal via Box-Muller; generates pairs, caches the second
  double normal();

  // uniform integer in [0, n)
  uint64_t below(uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hpm
