#pragma once

// Time evolution of a SpinState under a time-dependent, noise-modulated
// Hamiltonian via piecewise-constant matrix-exponential stepping.
//
// Stepping rule: per step, freeze the noise values, build H at the midpoint
// time t + dt/2, apply U = exp(-i H dt), then advance the noise processes by
// dt. The state is never renormalized; norm drift is a correctness signal
// and drift beyond 1e-6 raises NumericalError.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spinsim/effective.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/hamiltonians.hpp"
#include "spinsim/ou_noise.hpp"
#include "spinsim/spin1.hpp"

namespace spinsim {

enum class Frame { Lab, RotRwa, RotExact };

// Declarative description of a noise channel; live processes are seeded per
// trajectory from (base_seed, trajectory, channel).
struct NoiseChannelSpec {
  double tau = 0.0;  // us
  double c = 0.0;    // (rad/us)^2/us
};

struct NoiseSpec {
  std::optional<NoiseChannelSpec> system;     // delta_E(t)
  std::optional<NoiseChannelSpec> amplitude;  // delta_Omega1(t)
};

// Declarative description of one simulation scenario.
struct Scenario {
  StaticParams statics;
  DriveParams drive;
  std::optional<SignalParams> signal;
  Frame frame = Frame::RotRwa;
  NoiseSpec noise;
};

// Hamiltonian of the scenario at time t with frozen noise values.
Matrix3c scenario_hamiltonian(const Scenario& s, double t, const NoiseValues& noise);

// Largest angular frequency present in the scenario's Hamiltonian entries
// and spectrum (rad/us); drives the step-size guard.
double scenario_max_frequency(const Scenario& s);

struct IntegrationConfig {
  double dt = 0.0;          // us; <= 0 selects the automatic step
  double t_end = 0.0;       // us
  int sample_stride = 0;    // record every k-th step; <= 0 selects automatically
  double max_freq_guard = 20.0;  // required ratio of 1/dt to f_max
};

// dt = min(1/(guard*f_max), t_end/2048), so slow scenarios still sample
// densely enough for envelope extraction.
double auto_dt(double f_max, const IntegrationConfig& cfg);

// Checks dt * f_max <= 1/guard; throws PhysicsGuardError("step-guard") with
// the computed f_max otherwise.
void check_step_guard(double dt, double f_max, double guard);

struct Observable {
  std::string name;
  std::function<double(double t, const SpinState&)> eval;
};

Observable expectation_observable(std::string name, const Matrix3c& op);
Observable population_observable(std::string name, int basis_index);

struct NoiseChannels {
  std::optional<OuProcess> system;
  std::optional<OuProcess> amplitude;
};

NoiseChannels make_channels(const NoiseSpec& spec, std::uint64_t base_seed,
                            std::uint64_t trajectory);

struct TrajectoryResult {
  std::vector<double> time;                       // sample grid, us
  std::vector<std::vector<double>> observables;   // [observable][sample]
  double final_norm = 1.0;
};

TrajectoryResult evolve(const SpinState& initial, const Scenario& scenario,
                        NoiseChannels channels, const IntegrationConfig& cfg,
                        const std::vector<Observable>& observables);

struct ConvergenceReport {
  double dt = 0.0;
  double max_deviation = 0.0;
  bool pass = false;  // max_deviation < 1e-4
};

// Runs the scenario at dt and dt/2 with identical noise paths (noise sampled
// on the finer grid and decimated for the coarse run) and reports the largest
// observable deviation on the common sample grid.
ConvergenceReport convergence_check(const SpinState& initial, const Scenario& scenario,
                                    std::uint64_t base_seed, const IntegrationConfig& cfg,
                                    const std::vector<Observable>& observables);

// --- two-level engine (effective models, AC sensing) ---

struct TwoLevelObservable {
  std::string name;
  std::function<double(double t, const Vector2c&)> eval;
};

using TwoLevelHamiltonian = std::function<Matrix2c(double t, const NoiseValues&)>;

TrajectoryResult evolve_two_level(const Vector2c& initial, const TwoLevelHamiltonian& h,
                                  double f_max, NoiseChannels channels,
                                  const IntegrationConfig& cfg,
                                  const std::vector<TwoLevelObservable>& observables);

}  // namespace spinsim
