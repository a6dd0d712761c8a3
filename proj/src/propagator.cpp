#include "spinsim/propagator.hpp"

#include <cmath>
#include <sstream>

namespace spinsim {

Matrix3c scenario_hamiltonian(const Scenario& s, double t, const NoiseValues& noise) {
  const SignalParams* sig = s.signal.has_value() ? &*s.signal : nullptr;
  switch (s.frame) {
    case Frame::Lab:
      return h_lab_driven(s.statics, s.drive, sig, noise, t);
    case Frame::RotRwa:
      return h_rotating(s.statics, s.drive, sig, noise, t, true);
    case Frame::RotExact:
      return h_rotating(s.statics, s.drive, sig, noise, t, false);
  }
  throw std::invalid_argument("scenario_hamiltonian: unknown frame");
}

namespace {

double noise_sigma(const std::optional<NoiseChannelSpec>& ch) {
  return ch ? std::sqrt(0.5 * ch->c * ch->tau) : 0.0;
}

}  // namespace

double scenario_max_frequency(const Scenario& s) {
  double f = 0.0;
  const double omega_ac = s.signal ? s.signal->omega_ac : 0.0;
  switch (s.frame) {
    case Frame::Lab:
      f = 2.0 * (s.statics.d + s.statics.ex) + omega_ac + 2.0 * s.drive.omega1;
      break;
    case Frame::RotRwa:
      switch (s.drive.scheme) {
        case DriveScheme::None: break;
        case DriveScheme::Linear:
        case DriveScheme::Orthogonal:
          f = 2.0 * s.drive.omega1;
          break;
        case DriveScheme::PhaseModulated:
          // the drive phase carries harmonics of 2*omega1
          f = 4.0 * s.drive.omega1;
          break;
      }
      if (s.signal) f += 2.0 * s.statics.ex + omega_ac;
      break;
    case Frame::RotExact:
      f = 2.0 * (s.statics.d + s.statics.ex) + 2.0 * s.statics.ex + omega_ac +
          2.0 * s.drive.omega1;
      break;
  }
  // spectral contribution of the noise excursions themselves
  f += 4.0 * (noise_sigma(s.noise.system) + noise_sigma(s.noise.amplitude));
  return f;
}

double auto_dt(double f_max, const IntegrationConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw ConfigError("IntegrationConfig: t_end must be positive");
  const double guard = cfg.max_freq_guard > 0.0 ? cfg.max_freq_guard : 20.0;
  double dt = cfg.t_end / 2048.0;
  if (f_max > 0.0) dt = std::min(dt, 1.0 / (guard * f_max));
  return dt;
}

void check_step_guard(double dt, double f_max, double guard) {
  if (dt * f_max > 1.0 / guard * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " us too coarse: f_max = " << f_max
        << " rad/us requires dt <= " << 1.0 / (guard * f_max);
    throw PhysicsGuardError("step-guard", msg.str());
  }
}

Observable expectation_observable(std::string name, const Matrix3c& op) {
  return Observable{std::move(name),
                    [op](double, const SpinState& psi) { return expectation(psi, op); }};
}

Observable population_observable(std::string name, int basis_index) {
  return Observable{std::move(name), [basis_index](double, const SpinState& psi) {
                      return std::norm(psi(basis_index));
                    }};
}

NoiseChannels make_channels(const NoiseSpec& spec, std::uint64_t base_seed,
                            std::uint64_t trajectory) {
  NoiseChannels ch;
  if (spec.system) {
    ch.system = OuProcess::stationary(spec.system->tau, spec.system->c,
                                      derive_seed(base_seed, trajectory, 0));
  }
  if (spec.amplitude) {
    ch.amplitude = OuProcess::stationary(spec.amplitude->tau, spec.amplitude->c,
                                         derive_seed(base_seed, trajectory, 1));
  }
  return ch;
}

namespace {

struct StepPlan {
  double dt = 0.0;
  long n_steps = 0;
  long stride = 1;
};

StepPlan plan_steps(double f_max, const IntegrationConfig& cfg) {
  if (!(cfg.t_end > 0.0)) throw ConfigError("IntegrationConfig: t_end must be positive");
  const double guard = cfg.max_freq_guard > 0.0 ? cfg.max_freq_guard : 20.0;
  double dt = cfg.dt;
  if (dt > 0.0) {
    check_step_guard(dt, f_max, guard);
  } else {
    dt = auto_dt(f_max, cfg);
  }
  StepPlan plan;
  plan.n_steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / dt - 1e-9)));
  plan.dt = cfg.t_end / static_cast<double>(plan.n_steps);
  plan.stride = cfg.sample_stride > 0
                    ? cfg.sample_stride
                    : std::max<long>(1, plan.n_steps / 8192);
  return plan;
}

// Fixed-dt exact OU stepping with precomputed coefficients.
struct HotChannel {
  OuProcess* process = nullptr;
  double decay = 1.0;
  double sigma = 0.0;

  static HotChannel make(std::optional<OuProcess>& p, double dt) {
    HotChannel h;
    if (p) {
      h.process = &*p;
      const auto coeff = p->coefficients(dt);
      h.decay = coeff.decay;
      h.sigma = coeff.sigma;
    }
    return h;
  }
  double advance() {
    return process != nullptr ? process->step_precomputed(decay, sigma) : 0.0;
  }
  double current() const { return process != nullptr ? process->current() : 0.0; }
};

template <typename State, typename HamFn, typename ApplyFn, typename EvalFn>
TrajectoryResult evolve_loop(State psi, const HamFn& hamiltonian, const ApplyFn& apply,
                             const EvalFn& eval, std::size_t n_observables,
                             const StepPlan& plan, NoiseChannels& channels) {
  TrajectoryResult out;
  out.observables.resize(n_observables);
  HotChannel sys = HotChannel::make(channels.system, plan.dt);
  HotChannel amp = HotChannel::make(channels.amplitude, plan.dt);

  auto record = [&](long step) {
    const double t = static_cast<double>(step) * plan.dt;
    out.time.push_back(t);
    eval(t, psi, out.observables);
  };

  record(0);
  NoiseValues values{sys.current(), amp.current()};
  for (long k = 0; k < plan.n_steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * plan.dt;
    psi = apply(hamiltonian(t_mid, values), plan.dt, psi);
    values.delta_e = sys.advance();
    values.delta_omega1 = amp.advance();
    if ((k + 1) % plan.stride == 0 || k + 1 == plan.n_steps) record(k + 1);
    if ((k & 0xFFF) == 0xFFF && std::abs(psi.norm() - 1.0) > 1e-6) {
      throw NumericalError("evolve: norm drift exceeded 1e-6 mid-run");
    }
  }
  out.final_norm = psi.norm();
  if (std::abs(out.final_norm - 1.0) > 1e-6) {
    throw NumericalError("evolve: final norm drift exceeded 1e-6");
  }
  return out;
}

}  // namespace

TrajectoryResult evolve(const SpinState& initial, const Scenario& scenario,
                        NoiseChannels channels, const IntegrationConfig& cfg,
                        const std::vector<Observable>& observables) {
  if (!is_normalized(initial)) {
    throw std::invalid_argument("evolve: initial state is not normalized");
  }
  check_drive(scenario.statics, scenario.drive);
  const StepPlan plan = plan_steps(scenario_max_frequency(scenario), cfg);
  auto hamiltonian = [&](double t, const NoiseValues& v) {
    return scenario_hamiltonian(scenario, t, v);
  };
  auto apply = [](const Matrix3c& h, double dt, const SpinState& psi) {
    return apply_exponential_skew(h, dt, psi);
  };
  auto eval = [&](double t, const SpinState& psi, std::vector<std::vector<double>>& obs) {
    for (std::size_t i = 0; i < observables.size(); ++i) {
      obs[i].push_back(observables[i].eval(t, psi));
    }
  };
  return evolve_loop(initial, hamiltonian, apply, eval, observables.size(), plan, channels);
}

TrajectoryResult evolve_two_level(const Vector2c& initial, const TwoLevelHamiltonian& h,
                                  double f_max, NoiseChannels channels,
                                  const IntegrationConfig& cfg,
                                  const std::vector<TwoLevelObservable>& observables) {
  if (std::abs(initial.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("evolve_two_level: initial state is not normalized");
  }
  const StepPlan plan = plan_steps(f_max, cfg);
  auto apply = [](const Matrix2c& m, double dt, const Vector2c& psi) {
    return apply_exponential_skew2(m, dt, psi);
  };
  auto eval = [&](double t, const Vector2c& psi, std::vector<std::vector<double>>& obs) {
    for (std::size_t i = 0; i < observables.size(); ++i) {
      obs[i].push_back(observables[i].eval(t, psi));
    }
  };
  return evolve_loop(initial, h, apply, eval, observables.size(), plan, channels);
}

namespace {

// Tabulated noise values on a fine grid, decimated for the coarse run.
std::vector<NoiseValues> tabulate_noise(NoiseChannels& channels, double dt_fine, long n_fine) {
  std::vector<NoiseValues> path(static_cast<std::size_t>(n_fine));
  HotChannel sys = HotChannel::make(channels.system, dt_fine);
  HotChannel amp = HotChannel::make(channels.amplitude, dt_fine);
  path[0] = NoiseValues{sys.current(), amp.current()};
  for (long k = 1; k < n_fine; ++k) {
    path[k] = NoiseValues{sys.advance(), amp.advance()};
  }
  return path;
}

TrajectoryResult evolve_tabulated(const SpinState& initial, const Scenario& scenario,
                                  const std::vector<NoiseValues>& path, int decimation,
                                  double dt, long n_steps, long stride,
                                  const std::vector<Observable>& observables) {
  TrajectoryResult out;
  out.observables.resize(observables.size());
  SpinState psi = initial;
  auto record = [&](long step) {
    const double t = static_cast<double>(step) * dt;
    out.time.push_back(t);
    for (std::size_t i = 0; i < observables.size(); ++i) {
      out.observables[i].push_back(observables[i].eval(t, psi));
    }
  };
  record(0);
  for (long k = 0; k < n_steps; ++k) {
    const NoiseValues& v = path[static_cast<std::size_t>(k) * decimation];
    const Matrix3c h = scenario_hamiltonian(scenario, (k + 0.5) * dt, v);
    psi = apply_exponential_skew(h, dt, psi);
    if ((k + 1) % stride == 0 || k + 1 == n_steps) record(k + 1);
  }
  out.final_norm = psi.norm();
  return out;
}

}  // namespace

ConvergenceReport convergence_check(const SpinState& initial, const Scenario& scenario,
                                    std::uint64_t base_seed, const IntegrationConfig& cfg,
                                    const std::vector<Observable>& observables) {
  const StepPlan plan = plan_steps(scenario_max_frequency(scenario), cfg);
  NoiseChannels channels = make_channels(scenario.noise, base_seed, 0);
  const long n_fine = 2 * plan.n_steps;
  const std::vector<NoiseValues> path = tabulate_noise(channels, 0.5 * plan.dt, n_fine);

  const long stride = plan.stride;
  TrajectoryResult coarse = evolve_tabulated(initial, scenario, path, 2, plan.dt,
                                             plan.n_steps, stride, observables);
  TrajectoryResult fine = evolve_tabulated(initial, scenario, path, 1, 0.5 * plan.dt,
                                           n_fine, 2 * stride, observables);

  ConvergenceReport report;
  report.dt = plan.dt;
  for (std::size_t i = 0; i < coarse.observables.size(); ++i) {
    const std::size_t n = std::min(coarse.observables[i].size(), fine.observables[i].size());
    for (std::size_t k = 0; k < n; ++k) {
      report.max_deviation = std::max(
          report.max_deviation, std::abs(coarse.observables[i][k] - fine.observables[i][k]));
    }
  }
  report.pass = report.max_deviation < 1e-4;
  return report;
}

}  // namespace spinsim
