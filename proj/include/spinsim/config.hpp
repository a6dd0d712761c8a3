#pragma once

// Plain-text key=value run configuration with explicit units. Frequency
// fields carry an "MHz" suffix and are stored as angular frequencies
// (value * 2*pi rad/us); time fields carry "us". Unitless frequency or time
// values are rejected.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spinsim/experiments.hpp"

namespace spinsim {

enum class ExperimentKind { DephasingComparison, AcSensingTrace, AcSpectrum };

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::DephasingComparison;
  DephasingParams dephasing;
  SensingParams sensing;
  SpectrumParams spectrum;
  double bz = 0.0;  // gamma_e * B_z, rad/us; clock-regime guard input
  std::string output_prefix = "run";
  std::filesystem::path output_dir = ".";
  bool emit_csv = true;
  bool emit_summary = true;
  int n_threads = 0;  // 0 = auto (SPINSIM_THREADS env, then hardware)

  // The configuration with every default materialized, as key=value lines;
  // embedded in run summaries so a summary reproduces the run exactly.
  std::vector<std::string> resolved_lines() const;
};

// Parses a config file (or the key=value lines of one). Unknown keys, missing
// units and malformed values raise ConfigError with file:line context.
RunConfig parse_config_file(const std::filesystem::path& path);
RunConfig parse_config_lines(const std::vector<std::string>& lines,
                             const std::string& origin);

struct ValidationReport {
  std::vector<std::string> resolved;  // "name = value" lines of derived quantities
  std::vector<std::string> warnings;  // soft-guard messages
};

// Resolves derived parameters and runs every guard without executing the
// experiment. Physics-guard violations throw PhysicsGuardError.
ValidationReport validate_config(const RunConfig& config);

std::string experiment_name(ExperimentKind kind);

}  // namespace spinsim
