#include <doctest.h>

#include <cmath>

#include "spinsim/effective.hpp"
#include "spinsim/ensemble.hpp"

using namespace spinsim;

namespace {

Scenario clock_scenario() {
  Scenario s;
  s.statics = StaticParams{0.0, kTwoPi * 24.0, 0.0};
  s.drive.scheme = DriveScheme::None;
  s.noise.system = NoiseChannelSpec{20.0, 1.0 / (9.0 * 20.0)};
  return s;
}

std::vector<Observable> clock_observables() {
  return {expectation_observable("two_sx_c",
                                 two_sigma_x_op(scheme_basis(TwoLevelBasisTag::ClockC)))};
}

}  // namespace

TEST_CASE("single-trial ensemble equals the bare trajectory") {
  const Scenario s = clock_scenario();
  IntegrationConfig cfg;
  cfg.t_end = 6.0;
  const SpinState initial = superposition_state(scheme_basis(TwoLevelBasisTag::ClockC));
  const auto ensemble = run_ensemble(initial, s, clock_observables(), 1, 77, cfg, 1);
  const auto traj = evolve(initial, s, make_channels(s.noise, 77, 0), cfg, clock_observables());
  REQUIRE(ensemble.time.size() == traj.time.size());
  for (std::size_t i = 0; i < traj.time.size(); ++i) {
    CHECK(ensemble.mean[0][i] == traj.observables[0][i]);  // bitwise
    CHECK(ensemble.std_error[0][i] == 0.0);
  }
}

TEST_CASE("noise-free ensembles have zero standard error") {
  Scenario s = clock_scenario();
  s.noise.system.reset();
  IntegrationConfig cfg;
  cfg.t_end = 2.0;
  const auto ensemble = run_ensemble(ket0(), s, {population_observable("p0", 1)}, 16, 5, cfg, 2);
  for (double se : ensemble.std_error[0]) CHECK(se == 0.0);
}

TEST_CASE("seed determinism and thread invariance") {
  const Scenario s = clock_scenario();
  IntegrationConfig cfg;
  cfg.t_end = 5.0;
  const SpinState initial = superposition_state(scheme_basis(TwoLevelBasisTag::ClockC));
  const auto a = run_ensemble(initial, s, clock_observables(), 48, 123, cfg, 1);
  const auto b = run_ensemble(initial, s, clock_observables(), 48, 123, cfg, 1);
  const auto c = run_ensemble(initial, s, clock_observables(), 48, 123, cfg, 4);
  for (std::size_t i = 0; i < a.time.size(); ++i) {
    CHECK(a.mean[0][i] == b.mean[0][i]);       // bitwise, same thread count
    CHECK(a.mean[0][i] == c.mean[0][i]);       // bitwise across thread counts
    CHECK(a.std_error[0][i] == c.std_error[0][i]);
  }
  const auto other = run_ensemble(initial, s, clock_observables(), 48, 124, cfg, 1);
  bool all_equal = true;
  for (std::size_t i = 0; i < a.time.size() && all_equal; ++i) {
    all_equal = a.mean[0][i] == other.mean[0][i];
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("standard error scales as the inverse square root of the trial count") {
  const Scenario s = clock_scenario();
  IntegrationConfig cfg;
  cfg.t_end = 4.0;
  const SpinState initial = superposition_state(scheme_basis(TwoLevelBasisTag::ClockC));
  double se[3];
  const int counts[3] = {100, 400, 1600};
  for (int k = 0; k < 3; ++k) {
    const auto r = run_ensemble(initial, s, clock_observables(), counts[k], 9, cfg, 0);
    // average the late-time standard error where trial scatter is largest
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = r.time.size() / 2; i < r.time.size(); ++i) {
      acc += r.std_error[0][i];
      ++n;
    }
    se[k] = acc / static_cast<double>(n);
  }
  CHECK(se[0] / se[1] == doctest::Approx(2.0).epsilon(0.10));
  CHECK(se[1] / se[2] == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("ensemble mean stays inside the physical band") {
  const Scenario s = clock_scenario();
  IntegrationConfig cfg;
  cfg.t_end = 6.0;
  const SpinState initial = superposition_state(scheme_basis(TwoLevelBasisTag::ClockC));
  const auto r = run_ensemble(initial, s, clock_observables(), 64, 3, cfg, 0);
  for (std::size_t i = 0; i < r.time.size(); ++i) {
    CHECK(r.mean[0][i] <= 1.0 + 3.0 * r.std_error[0][i] + 1e-12);
    CHECK(r.mean[0][i] >= -1.0 - 3.0 * r.std_error[0][i] - 1e-12);
  }
}

TEST_CASE("trajectory failures carry the trial index") {
  Scenario s = clock_scenario();
  IntegrationConfig cfg;
  cfg.t_end = 2.0;
  cfg.dt = 0.5;  // violates the guard once noise raises f_max
  s.drive.scheme = DriveScheme::Orthogonal;
  s.drive.omega1 = kTwoPi * 10.0;
  try {
    run_ensemble(ket0(), s, {population_observable("p0", 1)}, 4, 1, cfg, 1);
    FAIL("expected a failure");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("trajectory 0") != std::string::npos);
  }
}

TEST_CASE("coherence fits") {
  SUBCASE("oscillating exponential") {
    std::vector<double> t, x;
    for (int i = 0; i < 3000; ++i) {
      const double ti = 0.005 * i;
      t.push_back(ti);
      x.push_back(std::exp(-ti / 5.0) * std::cos(10.0 * ti));
    }
    const CoherenceFit fit = fit_coherence(t, x, FitMethod::Envelope1e);
    CHECK_FALSE(fit.lower_bound);
    CHECK(fit.t2 == doctest::Approx(5.0).epsilon(0.02));
  }

  SUBCASE("stretched exponential recovery") {
    std::vector<double> t, x;
    for (int i = 0; i < 4000; ++i) {
      const double ti = 0.005 * i;
      t.push_back(ti);
      x.push_back(std::exp(-std::pow(ti / 7.0, 1.7)) * std::cos(20.0 * ti));
    }
    const CoherenceFit fit = fit_coherence(t, x, FitMethod::StretchedExp);
    CHECK_FALSE(fit.lower_bound);
    CHECK(fit.t2 == doctest::Approx(7.0).epsilon(0.05));
    CHECK(fit.stretch == doctest::Approx(1.7).epsilon(0.08));
  }

  SUBCASE("slow decay yields the lower-bound flag") {
    std::vector<double> t, x;
    for (int i = 0; i < 2000; ++i) {
      const double ti = 0.005 * i;
      t.push_back(ti);
      x.push_back(std::exp(-ti / 100.0) * std::cos(12.0 * ti));
    }
    const CoherenceFit fit = fit_coherence(t, x, FitMethod::Envelope1e);
    CHECK(fit.lower_bound);
    CHECK(fit.t2 == doctest::Approx(t.back()));
    const CoherenceFit stretched = fit_coherence(t, x, FitMethod::StretchedExp);
    CHECK(stretched.lower_bound);
  }

  SUBCASE("pure decay without oscillation") {
    std::vector<double> t, x;
    for (int i = 0; i < 2000; ++i) {
      const double ti = 0.01 * i;
      t.push_back(ti);
      x.push_back(std::exp(-ti * ti / 9.0));  // 1/e at t = 3
    }
    const CoherenceFit fit = fit_coherence(t, x, FitMethod::Envelope1e);
    CHECK(fit.t2 == doctest::Approx(3.0).epsilon(0.01));
  }
}
