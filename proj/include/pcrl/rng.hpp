#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pcrl {

// SplitMix64 step; also used as a stateless mixer for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Named substreams fanned out from one master seed. A (stream, instance)
// pair always maps to the same generator state no matter what other streams
// have drawn, so reordering unrelated work cannot change a run.
enum class Stream : std::uint64_t {
  Init = 1,          // network weight initialization
  Perturbation = 2,  // zeroth-order Gaussian directions
  RolloutPlus = 3,   // objective evaluation at theta + mu*u
  RolloutMinus = 4,  // objective evaluation at theta - mu*u
  Minibatch = 5,     // replay buffer draws
  Eval = 6,          // periodic policy evaluation
};

// Deterministic random source. Distributions are implemented here rather
// than with std::*_distribution, whose sequences are implementation-defined;
// mt19937_64 itself is pinned by the standard, so runs reproduce bit for bit
// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

  static Rng substream(std::uint64_t master, Stream stream, std::uint64_t instance = 0) {
    std::uint64_t s = mix64(master + 0x1b873593ULL);
    s = mix64(s ^ (static_cast<std::uint64_t>(stream) * 0x9e3779b97f4a7c15ULL));
    s = mix64(s ^ (instance * 0xc2b2ae3d27d4eb4fULL));
    Rng r(0);
    r.engine_.seed(s);
    return r;
  }

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (one draw per call, no cached spare).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcrl
