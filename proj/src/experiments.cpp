#include "spinsim/experiments.hpp"

#include <cmath>
#include <sstream>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {

// seed-derivation domains (trajectory channels 0/1 are taken by the OU streams)
constexpr std::uint64_t kSeedDomainScheme = 1001;
constexpr std::uint64_t kSeedDomainSweep = 1002;

}  // namespace

ResolvedNoise resolve_noise(const NoiseInputs& inputs, double omega1, double omega2,
                            const NoiseCalibration& calibration) {
  ResolvedNoise r;
  if (inputs.t2_star > 0.0) {
    if (!(inputs.tau_e > 0.0)) throw ConfigError("noise: tau_e must be positive");
    const double denom = inputs.t2_star * inputs.t2_star * inputs.tau_e;
    r.c_system_frequency_formula = 4.0 / denom;
    r.c_system_used = calibration.system == SystemNoiseCalibration::Operational
                          ? 1.0 / denom
                          : r.c_system_frequency_formula;
    r.system = NoiseChannelSpec{inputs.tau_e, r.c_system_used};
    r.sigma_system = std::sqrt(0.5 * r.c_system_used * inputs.tau_e);
  }
  if (inputs.delta_omega > 0.0) {
    if (!(inputs.tau_omega > 0.0)) throw ConfigError("noise: tau_omega must be positive");
    const double reference =
        calibration.amplitude == AmplitudeNoiseScale::SecondDrive ? omega2 : omega1;
    r.c_amplitude_first_drive =
        2.0 * std::pow(inputs.delta_omega * omega1, 2) / inputs.tau_omega;
    if (reference > 0.0) {
      r.sigma_amplitude = inputs.delta_omega * reference;
      r.c_amplitude_used = 2.0 * r.sigma_amplitude * r.sigma_amplitude / inputs.tau_omega;
      r.amplitude = NoiseChannelSpec{inputs.tau_omega, r.c_amplitude_used};
    }
  }
  return r;
}

namespace {

const char* scheme_label(DriveScheme scheme) {
  switch (scheme) {
    case DriveScheme::None: return "none";
    case DriveScheme::Linear: return "linear";
    case DriveScheme::Orthogonal: return "orthogonal";
    case DriveScheme::PhaseModulated: return "phase_modulated";
  }
  return "?";
}

const char* coherence_observable_name(DriveScheme scheme) {
  switch (scheme) {
    case DriveScheme::None: return "two_sx_c";
    case DriveScheme::Linear: return "two_sx_l";
    case DriveScheme::Orthogonal: return "two_sx_o";
    case DriveScheme::PhaseModulated: return "two_sx_p";
  }
  return "?";
}

double scheme_t_end(const DephasingParams& p, DriveScheme scheme) {
  switch (scheme) {
    case DriveScheme::None: return p.t_end_none;
    case DriveScheme::Linear: return p.t_end_linear;
    case DriveScheme::Orthogonal: return p.t_end_orthogonal;
    case DriveScheme::PhaseModulated: return p.t_end_phasemod;
  }
  return p.t_end_none;
}

}  // namespace

SchemeRun run_dephasing_scheme(const DephasingParams& params, DriveScheme scheme,
                               std::uint64_t scheme_seed) {
  Scenario scenario;
  scenario.statics = StaticParams{0.0, params.ex, 0.0};
  scenario.frame = Frame::RotRwa;
  scenario.drive.scheme = scheme;
  switch (scheme) {
    case DriveScheme::None:
      break;
    case DriveScheme::Linear:
    case DriveScheme::Orthogonal:
      scenario.drive.omega1 = params.omega1;
      break;
    case DriveScheme::PhaseModulated:
      scenario.drive.omega1 = params.omega1;
      scenario.drive.omega2 = params.omega2;
      break;
  }

  // The undriven and linear-drive runs isolate the system noise; the
  // amplitude channel applies to the orthogonally driven schemes.
  NoiseInputs inputs = params.noise;
  const bool amplitude_noise =
      scheme == DriveScheme::Orthogonal || scheme == DriveScheme::PhaseModulated;
  if (!amplitude_noise) inputs.delta_omega = 0.0;
  const ResolvedNoise noise =
      resolve_noise(inputs, params.omega1, params.omega2, params.calibration);
  scenario.noise.system = noise.system;
  scenario.noise.amplitude = noise.amplitude;

  const TwoLevelBasis basis = scheme_basis(scheme);
  std::vector<Observable> observables;
  observables.push_back(
      expectation_observable(coherence_observable_name(scheme), two_sigma_x_op(basis)));
  const bool monitor_leakage = amplitude_noise;  // schemes confined to the {|+1>,|0>} pair
  if (monitor_leakage) observables.push_back(population_observable("p_minus1", 2));

  IntegrationConfig cfg;
  cfg.t_end = scheme_t_end(params, scheme);
  cfg.max_freq_guard = params.max_freq_guard;

  SchemeRun run;
  run.scheme = scheme;
  run.label = scheme_label(scheme);
  run.noise = noise;
  run.result = run_ensemble(superposition_state(basis), scenario, observables,
                            params.n_trials, scheme_seed, cfg, params.n_threads);
  run.fit = fit_coherence(run.result, 0, FitMethod::Envelope1e);
  run.stretched = fit_coherence(run.result, 0, FitMethod::StretchedExp);
  if (monitor_leakage) {
    double acc = 0.0;
    for (double v : run.result.mean[1]) acc += v;
    run.mean_leakage = acc / static_cast<double>(run.result.mean[1].size());
  }
  return run;
}

std::array<SchemeRun, 4> dephasing_comparison(const DephasingParams& params) {
  const std::array<DriveScheme, 4> schemes{DriveScheme::None, DriveScheme::Linear,
                                           DriveScheme::Orthogonal,
                                           DriveScheme::PhaseModulated};
  std::array<SchemeRun, 4> runs;
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const std::uint64_t seed = derive_seed(params.base_seed, i, kSeedDomainScheme);
    runs[i] = run_dephasing_scheme(params, schemes[i], seed);
  }
  return runs;
}

namespace {

// e^{i omega t} on a fixed step grid: complex rotation with periodic resync
// against libm to keep the phase exact over millions of steps.
class Rotor {
 public:
  Rotor(double omega, double t0, double dt)
      : omega_(omega), t0_(t0), dt_(dt), factor_(std::polar(1.0, omega * dt)) {
    value_ = std::polar(1.0, omega * t0);
  }
  double cos_value() const { return value_.real(); }
  double sin_value() const { return value_.imag(); }
  void advance() {
    value_ *= factor_;
    if ((++count_ & 0xFFFF) == 0) {
      value_ = std::polar(1.0, omega_ * (t0_ + static_cast<double>(count_) * dt_));
    }
  }

 private:
  double omega_, t0_, dt_;
  Complex factor_;
  Complex value_{1.0, 0.0};
  long count_ = 0;
};

struct SensingGeometry {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double mismatch = 0.0;
};

SensingGeometry sensing_geometry(const SensingParams& p) {
  if (!(p.ratio > 1.0)) {
    throw PhysicsGuardError("drive-ratio", "sensing requires omega1/omega2 ratio > 1");
  }
  SensingGeometry geo;
  geo.omega1 = p.omega1_override ? *p.omega1_override : resonant_omega1(p.ex, p.omega_ac, p.ratio);
  if (!(geo.omega1 > 0.0)) {
    throw PhysicsGuardError("detection-band", "resonant omega1 is not positive");
  }
  geo.omega2 = geo.omega1 / p.ratio;
  geo.mismatch = 2.0 * p.ex - 2.0 * geo.omega1 - 2.0 * geo.omega2 - p.omega_ac;
  if (!p.omega1_override && std::abs(geo.mismatch) > 1e-9 * std::max(1.0, p.omega_ac)) {
    throw NumericalError("sensing: resonance condition violated by the resolved drive");
  }
  return geo;
}

// Doubly-dressed two-level sensing integrator. Builds the same Hamiltonian as
// effective_sensing_h but with rotor-tracked phases and a fused traceless 2x2
// exponential step; the equivalence is covered by a unit test.
TrajectoryResult sensing_two_level_trajectory(const SensingParams& p,
                                              const SensingGeometry& geo,
                                              const ResolvedNoise& noise, double f_max,
                                              const IntegrationConfig& cfg,
                                              std::uint64_t trial_seed_base,
                                              std::uint64_t trial) {
  NoiseChannels channels = make_channels(
      NoiseSpec{noise.system, noise.amplitude}, trial_seed_base, trial);

  if (!(cfg.t_end > 0.0)) throw ConfigError("sensing: t_end must be positive");
  const double guard = cfg.max_freq_guard > 0.0 ? cfg.max_freq_guard : 20.0;
  double dt = cfg.dt > 0.0 ? cfg.dt : std::min(cfg.t_end / 2048.0, 1.0 / (guard * f_max));
  check_step_guard(dt, f_max, guard);
  const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / dt - 1e-9)));
  dt = cfg.t_end / static_cast<double>(n_steps);
  const long stride =
      cfg.sample_stride > 0 ? cfg.sample_stride : std::max<long>(1, n_steps / 8192);

  OuProcess::Coefficients sys_coeff, amp_coeff;
  OuProcess* sys = channels.system ? &*channels.system : nullptr;
  OuProcess* amp = channels.amplitude ? &*channels.amplitude : nullptr;
  if (sys != nullptr) sys_coeff = sys->coefficients(dt);
  if (amp != nullptr) amp_coeff = amp->coefficients(dt);

  Rotor rot_ex(2.0 * p.ex, 0.5 * dt, dt);
  Rotor rot_ac(p.omega_ac, 0.5 * dt, dt);
  Rotor rot_o1(2.0 * geo.omega1, 0.5 * dt, dt);

  Complex psi0(0.0, 0.0);  // |+1> component
  Complex psi1(1.0, 0.0);  // |0> component: the initial state
  double delta_e = sys != nullptr ? sys->current() : 0.0;
  double delta_o = amp != nullptr ? amp->current() : 0.0;

  TrajectoryResult out;
  out.observables.resize(1);
  auto record = [&](long step) {
    out.time.push_back(static_cast<double>(step) * dt);
    out.observables[0].push_back(std::norm(psi1));
  };
  record(0);

  const double inv_two_omega1 = 0.5 / geo.omega1;
  for (long k = 0; k < n_steps; ++k) {
    const double x = delta_e * delta_e * inv_two_omega1 + delta_o;
    const double mod = p.g * rot_ex.cos_value() * rot_ac.cos_value();
    const double hz = geo.omega2 + 0.5 * mod * rot_o1.cos_value();
    const Complex b(x, 0.5 * mod * rot_o1.sin_value());
    // psi' = exp(-i dt (hz sz_pauli + Re b sx_pauli - ... )) psi, traceless 2x2
    const double radius = std::sqrt(hz * hz + std::norm(b));
    double c = 1.0, s = 0.0;
    if (radius > 0.0) {
      c = std::cos(radius * dt);
      s = std::sin(radius * dt) / radius;
    }
    const Complex a0 = Complex(c, -s * hz) * psi0 + Complex(0.0, -s) * b * psi1;
    const Complex a1 = Complex(0.0, -s) * std::conj(b) * psi0 + Complex(c, s * hz) * psi1;
    psi0 = a0;
    psi1 = a1;
    rot_ex.advance();
    rot_ac.advance();
    rot_o1.advance();
    if (sys != nullptr) delta_e = sys->step_precomputed(sys_coeff.decay, sys_coeff.sigma);
    if (amp != nullptr) delta_o = amp->step_precomputed(amp_coeff.decay, amp_coeff.sigma);
    if ((k + 1) % stride == 0 || k + 1 == n_steps) record(k + 1);
  }
  out.final_norm = std::sqrt(std::norm(psi0) + std::norm(psi1));
  if (std::abs(out.final_norm - 1.0) > 1e-6) {
    throw NumericalError("sensing: norm drift exceeded 1e-6");
  }
  return out;
}

}  // namespace

SensingRun ac_sensing_trace(const SensingParams& params) {
  const SensingGeometry geo = sensing_geometry(params);
  const ResolvedNoise noise =
      resolve_noise(params.noise, geo.omega1, geo.omega2, params.calibration);
  const SignalParams signal{params.g, params.omega_ac};

  SensingRun run;
  run.omega1 = geo.omega1;
  run.omega2 = geo.omega2;
  run.resonance_mismatch = geo.mismatch;
  run.noise = noise;
  run.engine = params.engine;

  IntegrationConfig cfg;
  cfg.t_end = params.t_end;
  cfg.max_freq_guard = params.max_freq_guard;

  if (params.engine == SensingEngine::TwoLevel) {
    const double f_max = 2.0 * params.ex + params.omega_ac + 2.0 * geo.omega1 +
                         4.0 * (noise.sigma_system + noise.sigma_amplitude);
    auto trajectory = [&](std::uint64_t trial) {
      return sensing_two_level_trajectory(params, geo, noise, f_max, cfg,
                                          params.base_seed, trial);
    };
    run.result = run_ensemble_generic(trajectory, {"p0"}, params.n_trials,
                                      params.base_seed, params.n_threads);
    return run;
  }

  // Full 3-level run in the first rotating frame; the reported population is
  // taken in the frame co-rotating with the first drive at its nominal rate.
  Scenario scenario;
  scenario.statics = StaticParams{0.0, params.ex, 0.0};
  scenario.frame = Frame::RotRwa;
  scenario.drive = DriveParams{};
  scenario.drive.scheme = DriveScheme::PhaseModulated;
  scenario.drive.omega1 = geo.omega1;
  scenario.drive.omega2 = geo.omega2;
  scenario.signal = signal;
  scenario.noise.system = noise.system;
  scenario.noise.amplitude = noise.amplitude;

  const double omega1 = geo.omega1;
  Observable p0_corot{"p0", [omega1](double t, const SpinState& psi) {
                        const double angle = omega1 * t;
                        const Complex c0 = std::cos(angle) * psi(1) +
                                           Complex(0.0, 1.0) * std::sin(angle) * psi(0);
                        return std::norm(c0);
                      }};
  std::vector<Observable> observables{p0_corot, population_observable("p_minus1", 2)};
  run.result = run_ensemble(ket0(), scenario, observables, params.n_trials,
                            params.base_seed, cfg, params.n_threads);
  return run;
}

SpectrumResult ac_spectrum(const SpectrumParams& params) {
  if (params.points < 3) throw ConfigError("spectrum: need at least 3 sweep points");
  if (!(params.t_probe > 0.0)) throw ConfigError("spectrum: t_probe must be positive");
  const double center = resonant_omega1(params.sensing.ex, params.sensing.omega_ac,
                                        params.sensing.ratio);
  SpectrumResult spectrum;
  spectrum.omega1_nominal = center;
  spectrum.rows.reserve(static_cast<std::size_t>(params.points));

  for (int i = 0; i < params.points; ++i) {
    const double frac = params.points > 1
                            ? static_cast<double>(i) / (params.points - 1.0) - 0.5
                            : 0.0;
    SensingParams point = params.sensing;
    point.omega1_override = center + frac * params.span;
    point.t_end = params.t_probe;
    point.base_seed = derive_seed(params.sensing.base_seed, static_cast<std::uint64_t>(i),
                                  kSeedDomainSweep);
    const SensingRun run = ac_sensing_trace(point);
    SpectrumRow row;
    row.omega1 = *point.omega1_override;
    row.omega2 = row.omega1 / params.sensing.ratio;
    row.p0 = run.result.mean[0].back();
    row.std_error = run.result.std_error[0].back();
    spectrum.rows.push_back(row);
  }

  // dip location, parabolic refinement
  std::size_t i_min = 0;
  for (std::size_t i = 1; i < spectrum.rows.size(); ++i) {
    if (spectrum.rows[i].p0 < spectrum.rows[i_min].p0) i_min = i;
  }
  spectrum.omega1_extremum = spectrum.rows[i_min].omega1;
  if (i_min > 0 && i_min + 1 < spectrum.rows.size()) {
    const double ym = spectrum.rows[i_min - 1].p0;
    const double y0 = spectrum.rows[i_min].p0;
    const double yp = spectrum.rows[i_min + 1].p0;
    const double denom = ym - 2.0 * y0 + yp;
    if (denom != 0.0) {
      const double shift = 0.5 * (ym - yp) / denom;
      const double step = spectrum.rows[1].omega1 - spectrum.rows[0].omega1;
      spectrum.omega1_extremum += shift * step;
    }
  }

  // full width at half depth
  const std::size_t n = spectrum.rows.size();
  const double baseline =
      0.25 * (spectrum.rows[0].p0 + spectrum.rows[1].p0 + spectrum.rows[n - 2].p0 +
              spectrum.rows[n - 1].p0);
  const double depth = baseline - spectrum.rows[i_min].p0;
  const double half = baseline - 0.5 * depth;
  double left = spectrum.rows.front().omega1;
  double right = spectrum.rows.back().omega1;
  for (std::size_t i = i_min; i > 0; --i) {
    if (spectrum.rows[i - 1].p0 >= half && spectrum.rows[i].p0 < half) {
      const double w = (spectrum.rows[i - 1].p0 - half) /
                       (spectrum.rows[i - 1].p0 - spectrum.rows[i].p0);
      left = spectrum.rows[i - 1].omega1 +
             w * (spectrum.rows[i].omega1 - spectrum.rows[i - 1].omega1);
      break;
    }
  }
  for (std::size_t i = i_min; i + 1 < n; ++i) {
    if (spectrum.rows[i].p0 < half && spectrum.rows[i + 1].p0 >= half) {
      const double w = (half - spectrum.rows[i].p0) /
                       (spectrum.rows[i + 1].p0 - spectrum.rows[i].p0);
      right = spectrum.rows[i].omega1 +
              w * (spectrum.rows[i + 1].omega1 - spectrum.rows[i].omega1);
      break;
    }
  }
  spectrum.linewidth_fwhm = right - left;
  return spectrum;
}

double sensitivity_improvement_estimate(double g, double t2_star, double ex, double t2) {
  if (!(ex > 0.0) || !(t2 > 0.0) || !(t2_star > 0.0)) return 0.0;
  return g * std::sqrt(t2_star) / (ex * std::sqrt(t2));
}

}  // namespace spinsim
