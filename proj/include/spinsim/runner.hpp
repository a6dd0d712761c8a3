#pragma once

// Executes a parsed RunConfig and writes its CSV/summary outputs.

#include <filesystem>
#include <vector>

#include "spinsim/config.hpp"

namespace spinsim {

struct RunOutputs {
  std::vector<std::filesystem::path> csv_files;
  std::filesystem::path summary_file;  // empty when summary emission is off
};

RunOutputs run_experiment(const RunConfig& config);

// Loads either a key=value config file or a previously written run summary
// (detected by a leading '{'); a summary reproduces its run bit-exactly.
RunConfig load_config_any(const std::filesystem::path& path);

}  // namespace spinsim
