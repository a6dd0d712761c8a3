#pragma once

// Monte Carlo averaging over noise realizations and coherence-time
// extraction.
//
// Reduction contract: trials are grouped into fixed blocks of 16 trajectories
// (independent of thread count); blocks are summed serially in trial order and
// block partials are combined by a fixed-order pairwise tree, so the mean is
// bitwise identical for any number of worker threads.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spinsim/propagator.hpp"

namespace spinsim {

struct EnsembleResult {
  std::vector<double> time;
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> mean;        // [observable][sample]
  std::vector<std::vector<double>> std_error;   // sample std / sqrt(n)
  int n_trials = 0;
  std::uint64_t base_seed = 0;
};

EnsembleResult run_ensemble(const SpinState& initial, const Scenario& scenario,
                            const std::vector<Observable>& observables, int n_trials,
                            std::uint64_t base_seed, const IntegrationConfig& cfg,
                            int n_threads = 0);

// Generic driver shared by the 3-level and 2-level engines: trajectory(k)
// computes trial k and must return identical time grids across trials.
EnsembleResult run_ensemble_generic(
    const std::function<TrajectoryResult(std::uint64_t trial)>& trajectory,
    std::vector<std::string> observable_names, int n_trials, std::uint64_t base_seed,
    int n_threads);

enum class FitMethod { Envelope1e, StretchedExp };

struct CoherenceFit {
  double t2 = 0.0;           // us; equals t_end when lower_bound is set
  double stretch = 1.0;      // stretched-exponential exponent (StretchedExp only)
  double residual = 0.0;     // RMS misfit of the envelope model
  FitMethod method = FitMethod::Envelope1e;
  bool lower_bound = false;  // envelope never crossed 1/e within t_end
  double amplitude = 1.0;    // extrapolated envelope at t = 0
};

// Envelope1e: analytic-signal (or peak-interpolated) envelope, first crossing
// of amplitude/e. StretchedExp: least-squares fit of the envelope to
// A exp(-(t/T2)^p) via log-log regression.
CoherenceFit fit_coherence(const EnsembleResult& result, int observable_index,
                           FitMethod method);
CoherenceFit fit_coherence(const std::vector<double>& time, const std::vector<double>& trace,
                           FitMethod method);

int default_thread_count();

}  // namespace spinsim
