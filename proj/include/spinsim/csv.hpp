#pragma once

// RFC-4180-style CSV emission ('.' decimal point, no locale dependence).
// Column order: time, then observables in declaration order, then the
// standard-error columns in the same order.

#include <filesystem>

#include "spinsim/ensemble.hpp"
#include "spinsim/experiments.hpp"

namespace spinsim {

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleResult& result);
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);

}  // namespace spinsim
