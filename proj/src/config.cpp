#include "spinsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {

enum class ValueKind { Frequency, Time, Dimensionless, Integer, Choice, Text };

struct RawEntry {
  std::string value;
  std::string origin;  // file:line
  bool used = false;
};

using RawMap = std::map<std::string, RawEntry>;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw ConfigError(origin + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token, const RawEntry& entry) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    fail(entry.origin, "not a number: '" + token + "'");
  }
  if (pos != token.size()) fail(entry.origin, "trailing characters in number: '" + token + "'");
  return v;
}

// Frequencies: "<value> MHz" (stored as 2*pi*value) or "<value> rad_us"
// (stored verbatim; used by round-trippable summaries).
double parse_frequency(const RawEntry& entry) {
  std::istringstream in(entry.value);
  std::string number, unit;
  in >> number >> unit;
  if (unit.empty()) {
    fail(entry.origin, "frequency needs a unit suffix (MHz or rad_us): '" + entry.value + "'");
  }
  const double v = parse_number(number, entry);
  if (unit == "MHz") return mhz(v);
  if (unit == "rad_us") return v;
  fail(entry.origin, "unknown frequency unit '" + unit + "' (expected MHz or rad_us)");
}

double parse_time(const RawEntry& entry) {
  std::istringstream in(entry.value);
  std::string number, unit;
  in >> number >> unit;
  if (unit != "us") {
    fail(entry.origin, "time needs the unit suffix 'us': '" + entry.value + "'");
  }
  return parse_number(number, entry);
}

double parse_dimensionless(const RawEntry& entry) {
  std::istringstream in(entry.value);
  std::string number, extra;
  in >> number >> extra;
  if (!extra.empty() && extra != "dimensionless") {
    fail(entry.origin, "unexpected unit on dimensionless field: '" + entry.value + "'");
  }
  return parse_number(number, entry);
}

long parse_integer(const RawEntry& entry) {
  const double v = parse_dimensionless(entry);
  if (v != std::floor(v)) fail(entry.origin, "expected an integer: '" + entry.value + "'");
  return static_cast<long>(v);
}

class ConfigReader {
 public:
  explicit ConfigReader(RawMap raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  template <typename F>
  bool apply(const std::string& key, const F& f) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return false;
    it->second.used = true;
    f(it->second);
    return true;
  }

  void number(const std::string& key, ValueKind kind, double* out) {
    apply(key, [&](const RawEntry& e) {
      switch (kind) {
        case ValueKind::Frequency: *out = parse_frequency(e); break;
        case ValueKind::Time: *out = parse_time(e); break;
        case ValueKind::Dimensionless: *out = parse_dimensionless(e); break;
        default: fail(e.origin, "internal: bad kind");
      }
    });
  }

  void integer(const std::string& key, long* out) {
    apply(key, [&](const RawEntry& e) { *out = parse_integer(e); });
  }

  void text(const std::string& key, std::string* out) {
    apply(key, [&](const RawEntry& e) { *out = trim(e.value); });
  }

  void finish(const std::string& origin) const {
    for (const auto& [key, entry] : raw_) {
      if (!entry.used) fail(entry.origin.empty() ? origin : entry.origin, "unknown key '" + key + "'");
    }
  }

 private:
  RawMap raw_;
};

RawMap read_lines(const std::vector<std::string>& lines, const std::string& origin) {
  RawMap raw;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    std::ostringstream where;
    where << origin << ":" << (i + 1);
    if (eq == std::string::npos) fail(where.str(), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(where.str(), "expected 'key = value'");
    if (raw.count(key)) fail(where.str(), "duplicate key '" + key + "'");
    raw[key] = RawEntry{value, where.str(), false};
  }
  return raw;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::DephasingComparison: return "dephasing_comparison";
    case ExperimentKind::AcSensingTrace: return "ac_sensing_trace";
    case ExperimentKind::AcSpectrum: return "ac_spectrum";
  }
  return "?";
}

RunConfig parse_config_lines(const std::vector<std::string>& lines,
                             const std::string& origin) {
  ConfigReader reader(read_lines(lines, origin));
  RunConfig cfg;

  bool have_experiment = false;
  reader.apply("experiment", [&](const RawEntry& e) {
    const std::string name = trim(e.value);
    if (name == "dephasing_comparison") {
      cfg.experiment = ExperimentKind::DephasingComparison;
    } else if (name == "ac_sensing_trace") {
      cfg.experiment = ExperimentKind::AcSensingTrace;
    } else if (name == "ac_spectrum") {
      cfg.experiment = ExperimentKind::AcSpectrum;
    } else {
      fail(e.origin, "unknown experiment '" + name + "'");
    }
    have_experiment = true;
  });
  if (!have_experiment) fail(origin, "missing required key 'experiment'");

  NoiseCalibration calibration;
  reader.apply("system_noise_calibration", [&](const RawEntry& e) {
    const std::string v = trim(e.value);
    if (v == "operational") {
      calibration.system = SystemNoiseCalibration::Operational;
    } else if (v == "frequency_formula") {
      calibration.system = SystemNoiseCalibration::FrequencyNoiseFormula;
    } else {
      fail(e.origin, "system_noise_calibration must be operational or frequency_formula");
    }
  });
  reader.apply("amplitude_noise_scale", [&](const RawEntry& e) {
    const std::string v = trim(e.value);
    if (v == "second_drive") {
      calibration.amplitude = AmplitudeNoiseScale::SecondDrive;
    } else if (v == "first_drive") {
      calibration.amplitude = AmplitudeNoiseScale::FirstDrive;
    } else {
      fail(e.origin, "amplitude_noise_scale must be second_drive or first_drive");
    }
  });

  NoiseInputs noise;
  noise.t2_star = 0.0;
  noise.delta_omega = 0.0;
  reader.number("t2_star", ValueKind::Time, &noise.t2_star);
  reader.number("tau_e", ValueKind::Time, &noise.tau_e);
  reader.number("delta_omega", ValueKind::Dimensionless, &noise.delta_omega);
  reader.number("tau_omega", ValueKind::Time, &noise.tau_omega);

  long n_trials = -1, base_seed = -1, n_threads = 0;
  reader.integer("n_trials", &n_trials);
  reader.apply("base_seed", [&](const RawEntry& e) { base_seed = parse_integer(e); });
  reader.apply("n_threads", [&](const RawEntry& e) {
    if (trim(e.value) == "auto") {
      n_threads = 0;
    } else {
      n_threads = parse_integer(e);
      if (n_threads < 1) fail(e.origin, "n_threads must be positive or 'auto'");
    }
  });
  double guard = 20.0;
  reader.number("max_freq_guard", ValueKind::Dimensionless, &guard);
  reader.number("bz", ValueKind::Frequency, &cfg.bz);

  reader.text("output_prefix", &cfg.output_prefix);
  std::string outdir;
  reader.text("output_dir", &outdir);
  if (!outdir.empty()) cfg.output_dir = outdir;
  reader.apply("emit", [&](const RawEntry& e) {
    cfg.emit_csv = false;
    cfg.emit_summary = false;
    std::string token;
    std::istringstream in(e.value);
    while (std::getline(in, token, ',')) {
      token = trim(token);
      if (token == "csv") {
        cfg.emit_csv = true;
      } else if (token == "summary") {
        cfg.emit_summary = true;
      } else {
        fail(e.origin, "emit entries must be csv and/or summary");
      }
    }
  });

  cfg.n_threads = static_cast<int>(n_threads);

  switch (cfg.experiment) {
    case ExperimentKind::DephasingComparison: {
      DephasingParams& p = cfg.dephasing;
      p.noise = noise;
      p.calibration = calibration;
      p.max_freq_guard = guard;
      p.n_threads = cfg.n_threads;
      if (n_trials > 0) p.n_trials = static_cast<int>(n_trials);
      if (base_seed >= 0) p.base_seed = static_cast<std::uint64_t>(base_seed);
      reader.number("ex", ValueKind::Frequency, &p.ex);
      reader.number("omega1", ValueKind::Frequency, &p.omega1);
      reader.number("omega2", ValueKind::Frequency, &p.omega2);
      reader.number("t_end_none", ValueKind::Time, &p.t_end_none);
      reader.number("t_end_linear", ValueKind::Time, &p.t_end_linear);
      reader.number("t_end_orthogonal", ValueKind::Time, &p.t_end_orthogonal);
      reader.number("t_end_phasemod", ValueKind::Time, &p.t_end_phasemod);
      break;
    }
    case ExperimentKind::AcSensingTrace:
    case ExperimentKind::AcSpectrum: {
      SensingParams& p = cfg.experiment == ExperimentKind::AcSensingTrace
                             ? cfg.sensing
                             : cfg.spectrum.sensing;
      p.noise = noise;
      p.calibration = calibration;
      p.max_freq_guard = guard;
      p.n_threads = cfg.n_threads;
      if (n_trials > 0) p.n_trials = static_cast<int>(n_trials);
      if (base_seed >= 0) p.base_seed = static_cast<std::uint64_t>(base_seed);
      reader.number("ex", ValueKind::Frequency, &p.ex);
      reader.number("omega_ac", ValueKind::Frequency, &p.omega_ac);
      reader.number("g", ValueKind::Frequency, &p.g);
      reader.number("drive_ratio", ValueKind::Dimensionless, &p.ratio);
      reader.number("t_end", ValueKind::Time, &p.t_end);
      reader.apply("engine", [&](const RawEntry& e) {
        const std::string v = trim(e.value);
        if (v == "two_level") {
          p.engine = SensingEngine::TwoLevel;
        } else if (v == "three_level") {
          p.engine = SensingEngine::ThreeLevel;
        } else {
          fail(e.origin, "engine must be two_level or three_level");
        }
      });
      reader.apply("omega1_override", [&](const RawEntry& e) {
        p.omega1_override = parse_frequency(e);
      });
      if (cfg.experiment == ExperimentKind::AcSpectrum) {
        SpectrumParams& sp = cfg.spectrum;
        reader.number("t_probe", ValueKind::Time, &sp.t_probe);
        reader.number("sweep_span", ValueKind::Frequency, &sp.span);
        long points = sp.points;
        reader.integer("sweep_points", &points);
        sp.points = static_cast<int>(points);
      }
      break;
    }
  }

  reader.finish(origin);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_config_lines(lines, path.filename().string());
}

std::vector<std::string> RunConfig::resolved_lines() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& key, const std::string& value) {
    out.push_back(key + " = " + value);
  };
  add("experiment", experiment_name(experiment));
  const NoiseInputs* noise = nullptr;
  const SensingParams* sense = nullptr;
  switch (experiment) {
    case ExperimentKind::DephasingComparison: {
      const DephasingParams& p = dephasing;
      noise = &p.noise;
      add("ex", fmt(p.ex) + " rad_us");
      add("omega1", fmt(p.omega1) + " rad_us");
      add("omega2", fmt(p.omega2) + " rad_us");
      add("n_trials", std::to_string(p.n_trials));
      add("base_seed", std::to_string(p.base_seed));
      add("t_end_none", fmt(p.t_end_none) + " us");
      add("t_end_linear", fmt(p.t_end_linear) + " us");
      add("t_end_orthogonal", fmt(p.t_end_orthogonal) + " us");
      add("t_end_phasemod", fmt(p.t_end_phasemod) + " us");
      add("max_freq_guard", fmt(p.max_freq_guard));
      add("system_noise_calibration",
          p.calibration.system == SystemNoiseCalibration::Operational ? "operational"
                                                                      : "frequency_formula");
      add("amplitude_noise_scale",
          p.calibration.amplitude == AmplitudeNoiseScale::SecondDrive ? "second_drive"
                                                                      : "first_drive");
      break;
    }
    case ExperimentKind::AcSensingTrace:
      sense = &sensing;
      break;
    case ExperimentKind::AcSpectrum:
      sense = &spectrum.sensing;
      break;
  }
  if (sense != nullptr) {
    const SensingParams& p = *sense;
    noise = &p.noise;
    add("ex", fmt(p.ex) + " rad_us");
    add("omega_ac", fmt(p.omega_ac) + " rad_us");
    add("g", fmt(p.g) + " rad_us");
    add("drive_ratio", fmt(p.ratio));
    add("n_trials", std::to_string(p.n_trials));
    add("base_seed", std::to_string(p.base_seed));
    add("t_end", fmt(p.t_end) + " us");
    add("max_freq_guard", fmt(p.max_freq_guard));
    add("engine", p.engine == SensingEngine::TwoLevel ? "two_level" : "three_level");
    if (p.omega1_override) add("omega1_override", fmt(*p.omega1_override) + " rad_us");
    add("system_noise_calibration",
        p.calibration.system == SystemNoiseCalibration::Operational ? "operational"
                                                                    : "frequency_formula");
    add("amplitude_noise_scale",
        p.calibration.amplitude == AmplitudeNoiseScale::SecondDrive ? "second_drive"
                                                                    : "first_drive");
    if (experiment == ExperimentKind::AcSpectrum) {
      add("t_probe", fmt(spectrum.t_probe) + " us");
      add("sweep_span", fmt(spectrum.span) + " rad_us");
      add("sweep_points", std::to_string(spectrum.points));
    }
  }
  if (noise != nullptr) {
    add("t2_star", fmt(noise->t2_star) + " us");
    add("tau_e", fmt(noise->tau_e) + " us");
    add("delta_omega", fmt(noise->delta_omega));
    add("tau_omega", fmt(noise->tau_omega) + " us");
  }
  if (bz != 0.0) add("bz", fmt(bz) + " rad_us");
  add("output_prefix", output_prefix);
  std::string emit;
  if (emit_csv) emit += "csv";
  if (emit_summary) emit += emit.empty() ? "summary" : ",summary";
  add("emit", emit);
  return out;
}

namespace {

void resolve_noise_report(const NoiseInputs& inputs, double omega1, double omega2,
                          const NoiseCalibration& calibration, ValidationReport* report) {
  const ResolvedNoise r = resolve_noise(inputs, omega1, omega2, calibration);
  auto add = [&](const std::string& k, double v) {
    report->resolved.push_back(k + " = " + fmt(v));
  };
  if (r.system) {
    add("c_system ((rad/us)^2/us)", r.c_system_used);
    add("c_system_frequency_formula ((rad/us)^2/us)", r.c_system_frequency_formula);
    add("sigma_system (rad/us)", r.sigma_system);
  }
  if (r.amplitude) {
    add("c_amplitude ((rad/us)^2/us)", r.c_amplitude_used);
    add("c_amplitude_first_drive ((rad/us)^2/us)", r.c_amplitude_first_drive);
    add("sigma_amplitude (rad/us)", r.sigma_amplitude);
  }
}

}  // namespace

ValidationReport validate_config(const RunConfig& config) {
  ValidationReport report;
  auto add = [&](const std::string& k, const std::string& v) {
    report.resolved.push_back(k + " = " + v);
  };
  add("experiment", experiment_name(config.experiment));

  switch (config.experiment) {
    case ExperimentKind::DephasingComparison: {
      const DephasingParams& p = config.dephasing;
      StaticParams statics{0.0, p.ex, config.bz};
      if (auto warn = clock_regime_warning(statics)) report.warnings.push_back(*warn);
      DriveParams drive;
      drive.scheme = DriveScheme::PhaseModulated;
      drive.omega1 = p.omega1;
      drive.omega2 = p.omega2;
      check_drive(statics, drive);  // strongest scheme guard of the four
      resolve_noise_report(p.noise, p.omega1, p.omega2, p.calibration, &report);
      Scenario scenario;
      scenario.statics = statics;
      scenario.drive = drive;
      scenario.noise.system = resolve_noise(p.noise, p.omega1, p.omega2, p.calibration).system;
      const double f_max = scenario_max_frequency(scenario);
      IntegrationConfig icfg;
      icfg.t_end = p.t_end_phasemod;
      icfg.max_freq_guard = p.max_freq_guard;
      add("f_max_phasemod (rad/us)", fmt(f_max));
      add("dt_phasemod (us)", fmt(auto_dt(f_max, icfg)));
      break;
    }
    case ExperimentKind::AcSensingTrace:
    case ExperimentKind::AcSpectrum: {
      const SensingParams& p = config.experiment == ExperimentKind::AcSensingTrace
                                   ? config.sensing
                                   : config.spectrum.sensing;
      StaticParams statics{0.0, p.ex, config.bz};
      if (auto warn = clock_regime_warning(statics)) report.warnings.push_back(*warn);
      const double omega1 =
          p.omega1_override ? *p.omega1_override : resonant_omega1(p.ex, p.omega_ac, p.ratio);
      const double omega2 = omega1 / p.ratio;
      DriveParams drive;
      drive.scheme = DriveScheme::PhaseModulated;
      drive.omega1 = omega1;
      drive.omega2 = omega2;
      check_drive(statics, drive);
      const SignalParams signal{p.g, p.omega_ac};
      if (auto warn = sensing_validity_warning(statics, signal)) {
        report.warnings.push_back(*warn);
      }
      const double mismatch = 2.0 * p.ex - 2.0 * omega1 - 2.0 * omega2 - p.omega_ac;
      if (!p.omega1_override && std::abs(mismatch) > 1e-9 * std::max(1.0, p.omega_ac)) {
        throw PhysicsGuardError("resonance-condition",
                                "2Ex - 2w1 - 2w2 - w_ac = " + fmt(mismatch));
      }
      add("omega1 (rad/us)", fmt(omega1));
      add("omega1 (MHz)", fmt(omega1 / kTwoPi));
      add("omega2 (rad/us)", fmt(omega2));
      add("omega2 (MHz)", fmt(omega2 / kTwoPi));
      add("resonance_mismatch (rad/us)", fmt(mismatch));
      resolve_noise_report(p.noise, omega1, omega2, p.calibration, &report);
      const ResolvedNoise noise = resolve_noise(p.noise, omega1, omega2, p.calibration);
      const double f_max = 2.0 * p.ex + p.omega_ac + 2.0 * omega1 +
                           4.0 * (noise.sigma_system + noise.sigma_amplitude);
      IntegrationConfig icfg;
      icfg.t_end = config.experiment == ExperimentKind::AcSpectrum ? config.spectrum.t_probe
                                                                   : p.t_end;
      icfg.max_freq_guard = p.max_freq_guard;
      add("f_max (rad/us)", fmt(f_max));
      add("dt (us)", fmt(auto_dt(f_max, icfg)));
      break;
    }
  }
  return report;
}

}  // namespace spinsim
