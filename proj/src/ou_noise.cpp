#include "spinsim/ou_noise.hpp"

#include <cmath>
#include <stdexcept>

#include "spinsim/types.hpp"

namespace spinsim {

double SplitMix64::normal() {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  // u1 shifted into (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  spare = radius * std::sin(angle);
  has_spare = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trajectory, std::uint64_t channel) {
  SplitMix64 mixer{base ^ (0xD1B54A32D192ED03ull * (trajectory + 1)) ^
                   (0x8CB92BA72F3D8DD7ull * (channel + 1))};
  return mixer.next();
}

OuProcess::OuProcess(double tau, double c, double initial, std::uint64_t seed)
    : tau_(tau), c_(c), current_(initial), seed_(seed), rng_{seed} {
  if (!(tau > 0.0)) throw std::invalid_argument("OuProcess: tau must be positive");
  if (!(c >= 0.0)) throw std::invalid_argument("OuProcess: c must be non-negative");
}

OuProcess OuProcess::stationary(double tau, double c, std::uint64_t seed) {
  OuProcess p(tau, c, 0.0, seed);
  p.current_ = p.stationary_sigma() * p.rng_.normal();
  return p;
}

OuProcess OuProcess::from_dephasing(double t2_star, double tau, std::uint64_t seed) {
  if (!(t2_star > 0.0)) throw std::invalid_argument("OuProcess: t2_star must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("OuProcess: tau must be positive");
  const double c = 4.0 / (t2_star * t2_star * tau);
  return stationary(tau, c, seed);
}

OuProcess OuProcess::amplitude_channel(double omega1, double delta_rel, double tau_omega,
                                       std::uint64_t seed) {
  if (!(omega1 > 0.0)) throw std::invalid_argument("OuProcess: omega1 must be positive");
  if (delta_rel < 0.0) throw std::invalid_argument("OuProcess: delta_rel must be non-negative");
  if (!(tau_omega > 0.0)) throw std::invalid_argument("OuProcess: tau_omega must be positive");
  const double sigma = delta_rel * omega1;
  const double c = 2.0 * sigma * sigma / tau_omega;
  return stationary(tau_omega, c, seed);
}

double OuProcess::step(double dt) {
  const Coefficients coeff = coefficients(dt);
  return step_precomputed(coeff.decay, coeff.sigma);
}

OuProcess::Coefficients OuProcess::coefficients(double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("OuProcess: dt must be positive");
  Coefficients coeff;
  coeff.decay = std::exp(-dt / tau_);
  coeff.sigma = std::sqrt(0.5 * c_ * tau_ * (1.0 - coeff.decay * coeff.decay));
  return coeff;
}

double OuProcess::stationary_sigma() const { return std::sqrt(0.5 * c_ * tau_); }

}  // namespace spinsim
