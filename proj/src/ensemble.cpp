#include "spinsim/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "spinsim/signal_math.hpp"

namespace spinsim {

int default_thread_count() {
  if (const char* env = std::getenv("SPINSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr int kBlockSize = 16;

struct BlockSums {
  std::vector<std::vector<double>> sum;     // [observable][sample]
  std::vector<std::vector<double>> sum_sq;  // [observable][sample]
  bool filled = false;

  void accumulate(const TrajectoryResult& traj) {
    if (sum.empty()) {
      sum.assign(traj.observables.size(), std::vector<double>(traj.time.size(), 0.0));
      sum_sq = sum;
    }
    for (std::size_t i = 0; i < traj.observables.size(); ++i) {
      for (std::size_t k = 0; k < traj.observables[i].size(); ++k) {
        const double v = traj.observables[i][k];
        sum[i][k] += v;
        sum_sq[i][k] += v * v;
      }
    }
    filled = true;
  }

  void merge(const BlockSums& other) {
    if (!other.filled) return;
    if (!filled) {
      *this = other;
      return;
    }
    for (std::size_t i = 0; i < sum.size(); ++i) {
      for (std::size_t k = 0; k < sum[i].size(); ++k) {
        sum[i][k] += other.sum[i][k];
        sum_sq[i][k] += other.sum_sq[i][k];
      }
    }
  }
};

}  // namespace

EnsembleResult run_ensemble_generic(
    const std::function<TrajectoryResult(std::uint64_t trial)>& trajectory,
    std::vector<std::string> observable_names, int n_trials, std::uint64_t base_seed,
    int n_threads) {
  if (n_trials < 1) throw std::invalid_argument("run_ensemble: n_trials must be >= 1");
  if (n_threads <= 0) n_threads = default_thread_count();

  const int n_blocks = (n_trials + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> blocks(static_cast<std::size_t>(n_blocks));
  std::vector<double> time_grid;
  std::atomic<int> next_block{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      const int lo = b * kBlockSize;
      const int hi = std::min(n_trials, lo + kBlockSize);
      for (int trial = lo; trial < hi; ++trial) {
        try {
          TrajectoryResult traj = trajectory(static_cast<std::uint64_t>(trial));
          if (trial == 0) time_grid = traj.time;
          blocks[static_cast<std::size_t>(b)].accumulate(traj);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error.empty()) {
            std::ostringstream msg;
            msg << "trajectory " << trial << ": " << e.what();
            first_error = msg.str();
          }
          return;
        }
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw NumericalError("run_ensemble aborted at " + first_error);

  // fixed-order pairwise combination of block partials
  std::vector<BlockSums> level = std::move(blocks);
  while (level.size() > 1) {
    std::vector<BlockSums> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      level[i].merge(level[i + 1]);
      next.push_back(std::move(level[i]));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  const BlockSums& total = level.front();

  EnsembleResult out;
  out.time = std::move(time_grid);
  out.observable_names = std::move(observable_names);
  out.n_trials = n_trials;
  out.base_seed = base_seed;
  const double n = static_cast<double>(n_trials);
  out.mean.resize(total.sum.size());
  out.std_error.resize(total.sum.size());
  for (std::size_t i = 0; i < total.sum.size(); ++i) {
    const std::size_t samples = total.sum[i].size();
    out.mean[i].resize(samples);
    out.std_error[i].resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
      const double mean = total.sum[i][k] / n;
      out.mean[i][k] = mean;
      if (n_trials > 1) {
        const double var = (total.sum_sq[i][k] - n * mean * mean) / (n - 1.0);
        out.std_error[i][k] = std::sqrt(std::max(var, 0.0) / n);
      } else {
        out.std_error[i][k] = 0.0;
      }
    }
  }
  return out;
}

EnsembleResult run_ensemble(const SpinState& initial, const Scenario& scenario,
                            const std::vector<Observable>& observables, int n_trials,
                            std::uint64_t base_seed, const IntegrationConfig& cfg,
                            int n_threads) {
  std::vector<std::string> names;
  names.reserve(observables.size());
  for (const auto& obs : observables) names.push_back(obs.name);
  auto trajectory = [&, initial, scenario, cfg](std::uint64_t trial) {
    NoiseChannels channels = make_channels(scenario.noise, base_seed, trial);
    return evolve(initial, scenario, std::move(channels), cfg, observables);
  };
  return run_ensemble_generic(trajectory, std::move(names), n_trials, base_seed, n_threads);
}

CoherenceFit fit_coherence(const EnsembleResult& result, int observable_index,
                           FitMethod method) {
  return fit_coherence(result.time, result.mean.at(static_cast<std::size_t>(observable_index)),
                       method);
}

CoherenceFit fit_coherence(const std::vector<double>& time, const std::vector<double>& trace,
                           FitMethod method) {
  if (time.size() != trace.size() || time.size() < 8) {
    throw std::invalid_argument("fit_coherence: trace too short");
  }
  std::vector<double> env = envelope(time, trace);

  CoherenceFit fit;
  fit.method = method;
  // Initial amplitude. Monotone traces carry no transform artifacts, so the
  // first samples are exact; oscillatory traces get a linear extrapolation of
  // the early envelope back to t = 0, past the clamped edge region.
  double a0 = 0.0;
  if (count_sign_changes(trace) < 6) {
    const std::size_t head = std::max<std::size_t>(2, env.size() / 100);
    for (std::size_t i = 0; i < head; ++i) a0 = std::max(a0, env[i]);
  } else {
    const std::size_t trim = std::max<std::size_t>(2, env.size() / 50);
    const std::size_t w_end = std::min(env.size(), std::max(3 * trim, trim + 16));
    if (w_end > trim + 4) {
      const std::vector<double> tw(time.begin() + trim, time.begin() + w_end);
      const std::vector<double> ew(env.begin() + trim, env.begin() + w_end);
      a0 = least_squares(tw, ew).intercept;
    }
    if (!(a0 > 0.0)) {
      for (std::size_t i = 0; i < w_end; ++i) a0 = std::max(a0, env[i]);
    }
  }
  fit.amplitude = a0;
  if (a0 <= 0.0) throw std::invalid_argument("fit_coherence: zero-amplitude trace");

  const double target = a0 * std::exp(-1.0);
  const double crossing = first_crossing_below(time, env, target);

  if (method == FitMethod::Envelope1e) {
    if (crossing < 0.0) {
      fit.lower_bound = true;
      fit.t2 = time.back();
    } else {
      fit.t2 = crossing;
    }
    // residual: RMS distance of the envelope to a plain exponential with the
    // fitted 1/e time, over the fitted range
    double ss = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < env.size(); ++i) {
      if (fit.lower_bound || time[i] <= 2.0 * fit.t2) {
        const double model = a0 * std::exp(-time[i] / fit.t2);
        ss += (env[i] - model) * (env[i] - model);
        ++count;
      }
    }
    fit.residual = count > 0 ? std::sqrt(ss / static_cast<double>(count)) : 0.0;
    return fit;
  }

  // stretched exponential: ln(-ln(W/A)) = p ln t - p ln T2
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double w = env[i] / a0;
    if (time[i] > 0.0 && w > 0.05 && w < 0.85) {
      xs.push_back(std::log(time[i]));
      ys.push_back(std::log(-std::log(w)));
    }
  }
  if (xs.size() < 8) {
    fit.lower_bound = true;
    fit.t2 = time.back();
    return fit;
  }
  const LinearFit line = least_squares(xs, ys);
  fit.stretch = line.slope;
  fit.t2 = std::exp(-line.intercept / line.slope);
  // a trace that never decayed meaningfully cannot pin (T2, p)
  if (!(fit.stretch >= 0.3 && fit.stretch <= 6.0) || !(fit.t2 > 0.0) ||
      fit.t2 > 3.0 * time.back()) {
    fit.lower_bound = true;
    fit.t2 = time.back();
    fit.stretch = 1.0;
    return fit;
  }
  double ss = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (time[i] <= 0.0) continue;
    const double model = a0 * std::exp(-std::pow(time[i] / fit.t2, fit.stretch));
    ss += (env[i] - model) * (env[i] - model);
    ++count;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(count));
  return fit;
}

}  // namespace spinsim
