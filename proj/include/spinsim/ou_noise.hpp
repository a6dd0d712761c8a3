#pragma once

// Exact-update Ornstein-Uhlenbeck processes for the system (strain/electric)
// noise channel and the drive-amplitude noise channel.
//
// Update rule (exact for any step, no discretization error):
//   x(t+dt) = x(t) * exp(-dt/tau) + n * sqrt((c*tau/2) * (1 - exp(-2*dt/tau)))
// with n a unit Gaussian. Stationary distribution is N(0, c*tau/2).
//
// Reproducibility contract: the generator is SplitMix64 and Gaussians come
// from a Box-Muller transform of two 53-bit uniforms; the transform yields a
// pair (cosine and sine branches) and the second draw is cached. The scheme
// is fixed; identical seeds give bitwise-identical paths. Per-trajectory
// streams are derived with derive_seed().

#include <cstdint>

namespace spinsim {

struct SplitMix64 {
  std::uint64_t state = 0;
  double spare = 0.0;
  bool has_spare = false;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unit Gaussian via pair-cached Box-Muller.
  double normal();
};

// Stable stream derivation for (base seed, trajectory, channel).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trajectory, std::uint64_t channel);

class OuProcess {
 public:
  // tau: correlation time (us), c: diffusion constant ((rad/us)^2/us).
  // Throws std::invalid_argument for tau <= 0 or c < 0.
  OuProcess(double tau, double c, double initial, std::uint64_t seed);

  // Initial value drawn from the stationary distribution N(0, c*tau/2).
  static OuProcess stationary(double tau, double c, std::uint64_t seed);

  // System-noise channel: c = 4 / (t2_star^2 * tau), stationary start.
  static OuProcess from_dephasing(double t2_star, double tau, std::uint64_t seed);

  // Amplitude-noise channel: c = 2 (delta_rel * omega1)^2 / tau_omega, so the
  // stationary deviation is delta_rel * omega1. Stationary start.
  static OuProcess amplitude_channel(double omega1, double delta_rel, double tau_omega,
                                     std::uint64_t seed);

  // Advance by dt (> 0, throws otherwise) and return the new value.
  double step(double dt);

  // Fixed-dt fast path for integrator loops: step() with the update
  // coefficients hoisted out of the loop. step(dt) and
  // step_precomputed(coefficients(dt)) produce identical values.
  struct Coefficients {
    double decay = 1.0;
    double sigma = 0.0;
  };
  Coefficients coefficients(double dt) const;
  double step_precomputed(double decay, double sigma) {
    current_ = current_ * decay + sigma * rng_.normal();
    return current_;
  }

  double current() const { return current_; }
  double tau() const { return tau_; }
  double c() const { return c_; }
  double stationary_sigma() const;
  std::uint64_t seed() const { return seed_; }

 private:
  double tau_;
  double c_;
  double current_;
  std::uint64_t seed_;
  SplitMix64 rng_;
};

}  // namespace spinsim
