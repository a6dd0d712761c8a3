#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "spinsim/errors.hpp"
#include "spinsim/hamiltonians.hpp"
#include "spinsim/ou_noise.hpp"
#include "spinsim/spin1.hpp"

using namespace spinsim;

namespace {

double rand_in(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

}  // namespace

TEST_CASE("static Hamiltonian eigenvalues") {
  SUBCASE("pure transverse splitting") {
    const StaticParams p{0.0, 1.0, 0.0};
    const Matrix3c h = h_lab(p, 0.0, 0.0);
    const Eigensystem3 sys = hermitian_eigensystem(h);
    CHECK(sys.values(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sys.values(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sys.values(2) == doctest::Approx(1.0).epsilon(1e-12));
    // eigenvectors (|-1> +- |+1>)/sqrt(2) up to phase
    const SpinState plus = (ket_minus1() + ket_plus1()) / std::sqrt(2.0);
    const SpinState minus = (ket_minus1() - ket_plus1()) / std::sqrt(2.0);
    CHECK(std::abs(plus.dot(sys.vectors.col(2))) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(minus.dot(sys.vectors.col(0))) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("closed forms on random draws") {
    SplitMix64 rng{314};
    for (int i = 0; i < 1000; ++i) {
      const StaticParams p{rand_in(rng, 0.0, 2e4), rand_in(rng, 1.0, 1e3),
                           rand_in(rng, -50.0, 50.0)};
      const double de = rand_in(rng, -0.5, 0.5);
      const double db = rand_in(rng, -0.5, 0.5);
      const Matrix3c h = h_lab(p, de, db);
      CHECK(hermiticity_error(h) < 1e-12);
      const Eigensystem3 sys = hermitian_eigensystem(h);
      const double r = std::hypot(p.ex + de, p.gamma_bz + db);
      std::array<double, 3> expected{p.d - r, 0.0, p.d + r};
      std::sort(expected.begin(), expected.end());
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(sys.values(k) - expected[k]) < 1e-10 * std::max(1.0, p.d));
      }
    }
  }

  SUBCASE("clock-regime limit") {
    const StaticParams p{100.0, 7.0, 0.0};
    const Eigensystem3 sys = hermitian_eigensystem(h_lab(p, 0.0, 0.0));
    CHECK(sys.values(2) == doctest::Approx(107.0).epsilon(1e-12));
    CHECK(sys.values(1) == doctest::Approx(93.0).epsilon(1e-12));
    CHECK(sys.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("analytic eigensystem") {
  SUBCASE("Zeeman-dominant limit, theta near 0") {
    const StaticParams p{0.0, 0.01, 10.0};
    const AnalyticEigensystem sys = analytic_eigensystem(p, 0.0, 0.0);
    CHECK(sys.theta < 0.01);
    CHECK(std::abs(sys.psi_plus.dot(ket_plus1())) > 0.9999);
    CHECK(std::abs(sys.psi_minus.dot(ket_minus1())) > 0.9999);
  }

  SUBCASE("transverse-dominant limit, theta near pi/2") {
    const StaticParams p{0.0, 10.0, 0.01};
    const AnalyticEigensystem sys = analytic_eigensystem(p, 0.0, 0.0);
    CHECK(sys.theta == doctest::Approx(kTwoPi / 4.0).epsilon(0.01));
    const SpinState plus = (ket_plus1() + ket_minus1()) / std::sqrt(2.0);
    CHECK(std::abs(plus.dot(sys.psi_plus)) > 0.999);
  }

  SUBCASE("matches numerical diagonalization on random draws") {
    SplitMix64 rng{99};
    for (int i = 0; i < 1000; ++i) {
      const StaticParams p{rand_in(rng, 0.0, 1e4), rand_in(rng, 0.5, 800.0),
                           rand_in(rng, -100.0, 100.0)};
      const double de = rand_in(rng, -0.3, 0.3);
      const double db = rand_in(rng, -0.3, 0.3);
      const AnalyticEigensystem sys = analytic_eigensystem(p, de, db);
      const Matrix3c h = h_lab(p, de, db);
      CHECK((h * sys.psi_plus - sys.omega_plus * sys.psi_plus).norm() < 1e-10 * (1.0 + p.d));
      CHECK((h * sys.psi_minus - sys.omega_minus * sys.psi_minus).norm() <
            1e-10 * (1.0 + p.d));
      CHECK((h * sys.psi_zero).norm() < 1e-12 * (1.0 + p.d));
    }
  }

  SUBCASE("degenerate point flagged") {
    const StaticParams p{5.0, 1.0, 0.0};
    const AnalyticEigensystem sys = analytic_eigensystem(p, -1.0, 0.0);
    CHECK(sys.degenerate);
  }
}

TEST_CASE("phase modulation") {
  const double w1 = kTwoPi * 10.0, w2 = kTwoPi * 1.0;
  CHECK(phase_modulation(0.0, w1, w2) == 0.0);
  const double quarter = kTwoPi / (8.0 * w1);  // 2 w1 t = pi/2
  CHECK(phase_modulation(quarter, w1, w2) == doctest::Approx(2.0 * w2 / w1).epsilon(1e-12));
  CHECK(phase_modulation(0.37, w1, 0.0) == 0.0);
  CHECK_THROWS_AS(phase_modulation(0.1, 0.0, w2), std::invalid_argument);
}

TEST_CASE("rotating-frame Hamiltonians under the RWA") {
  const StaticParams p{0.0, kTwoPi * 24.0, 0.0};
  const double omega = kTwoPi * 10.0;
  const double de = 0.8;

  SUBCASE("linear drive matrix") {
    DriveParams d;
    d.scheme = DriveScheme::Linear;
    d.omega1 = omega;
    const Matrix3c h = h_rotating(p, d, nullptr, NoiseValues{de, 0.0}, 1.3, true);
    Matrix3c expected = omega * spin_operator(Spin1Op::Sx);
    expected += de * spin_operator(Spin1Op::SxSqMinusSySq);
    CHECK((h - expected).norm() < 1e-13);
  }

  SUBCASE("orthogonal dual-frequency drive matrix") {
    DriveParams d;
    d.scheme = DriveScheme::Orthogonal;
    d.omega1 = omega;
    const Matrix3c h = h_rotating(p, d, nullptr, NoiseValues{de, 0.3}, 0.0, true);
    Matrix3c expected = Matrix3c::Zero();
    expected(0, 1) = omega + 0.3;
    expected(1, 0) = omega + 0.3;
    expected(0, 2) = de;
    expected(2, 0) = de;
    CHECK((h - expected).norm() < 1e-14);
  }

  SUBCASE("phase modulation reduces to the orthogonal form at zero strength") {
    DriveParams pm;
    pm.scheme = DriveScheme::PhaseModulated;
    pm.omega1 = omega;
    pm.omega2 = 0.0;
    DriveParams ortho;
    ortho.scheme = DriveScheme::Orthogonal;
    ortho.omega1 = omega;
    for (double t : {0.0, 0.11, 0.57}) {
      const Matrix3c a = h_rotating(p, pm, nullptr, NoiseValues{de, 0.0}, t, true);
      const Matrix3c b = h_rotating(p, ortho, nullptr, NoiseValues{de, 0.0}, t, true);
      CHECK((a - b).norm() < 1e-14);
    }
  }

  SUBCASE("phase-modulated coupling carries exp(-i phi(t))") {
    DriveParams d;
    d.scheme = DriveScheme::PhaseModulated;
    d.omega1 = omega;
    d.omega2 = kTwoPi * 1.0;
    const double t = 0.021;
    const Matrix3c h = h_rotating(p, d, nullptr, NoiseValues{0.0, 0.0}, t, true);
    const double phi = phase_modulation(t, d.omega1, d.omega2);
    CHECK(std::abs(h(0, 1) - omega * std::polar(1.0, -phi)) < 1e-13);
    CHECK(std::abs(h(1, 0) - omega * std::polar(1.0, phi)) < 1e-13);
  }

  SUBCASE("sensing term sits on the dressed pair diagonal") {
    DriveParams d;
    d.scheme = DriveScheme::PhaseModulated;
    d.omega1 = omega;
    d.omega2 = kTwoPi * 1.0;
    const SignalParams sig{0.5, kTwoPi * 5.0};
    const double t = 0.37;
    const Matrix3c with = h_rotating(p, d, &sig, NoiseValues{}, t, true);
    const Matrix3c without = h_rotating(p, d, nullptr, NoiseValues{}, t, true);
    const Matrix3c diff = with - without;
    const double s = sig.g * std::cos(2.0 * p.ex * t) * std::cos(sig.omega_ac * t);
    CHECK(std::abs(diff(0, 0) - 0.5 * s) < 1e-13);
    CHECK(std::abs(diff(1, 1) + 0.5 * s) < 1e-13);
    CHECK(std::abs(diff(2, 2)) < 1e-15);
  }
}

TEST_CASE("dressed eigen-system of the linear drive") {
  SplitMix64 rng{555};
  const StaticParams p{0.0, kTwoPi * 24.0, 0.0};
  for (int i = 0; i < 400; ++i) {
    const double omega = rand_in(rng, 5.0, 200.0);
    const double de = rand_in(rng, -0.4, 0.4) * omega;
    DriveParams d;
    d.scheme = DriveScheme::Linear;
    d.omega1 = omega;
    const Matrix3c h = h_rotating(p, d, nullptr, NoiseValues{de, 0.0}, 0.0, true);
    const Eigensystem3 sys = hermitian_eigensystem(h);

    const double root = std::sqrt(4.0 * omega * omega + de * de);
    std::array<double, 3> expected{0.5 * (de - root), -de, 0.5 * (de + root)};
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 3; ++k) CHECK(std::abs(sys.values(k) - expected[k]) < 1e-10 * omega);

    // closed-form eigenvectors up to phase: the eta-rotated symmetric pair
    // carries the dressed levels and (-|+1> + |-1>)/sqrt(2) rides at -dE
    const double rp = (root - de) / (std::sqrt(2.0) * omega);
    const double rm = (root + de) / (std::sqrt(2.0) * omega);
    const double sin_eta = rp / std::sqrt(2.0 + rp * rp);
    const double cos_eta = rm / std::sqrt(2.0 + rm * rm);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const SpinState mu_l(-inv_sqrt2, 0.0, inv_sqrt2);
    const SpinState v_upper(inv_sqrt2 * cos_eta, sin_eta, inv_sqrt2 * cos_eta);
    const SpinState v_lower(inv_sqrt2 * sin_eta, -cos_eta, inv_sqrt2 * sin_eta);

    auto column_for = [&](double value) {
      int best = 0;
      for (int k = 1; k < 3; ++k) {
        if (std::abs(sys.values(k) - value) < std::abs(sys.values(best) - value)) best = k;
      }
      return Vector3c(sys.vectors.col(best));
    };
    CHECK(std::abs(mu_l.dot(column_for(-de))) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(v_upper.dot(column_for(0.5 * (de + root)))) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(v_lower.dot(column_for(0.5 * (de - root)))) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("exact rotating frame reconstructs the lab spectrum") {
  const StaticParams p{kTwoPi * 2870.0, kTwoPi * 24.0, 0.0};
  DriveParams d;
  d.scheme = DriveScheme::Orthogonal;
  d.omega1 = kTwoPi * 10.0;
  const SignalParams sig{kTwoPi * 0.1, kTwoPi * 5.0};
  SplitMix64 rng{10};
  for (int i = 0; i < 50; ++i) {
    const double t = 3.0 * rng.uniform();
    const NoiseValues noise{0.3 * (rng.uniform() - 0.5), 0.2 * (rng.uniform() - 0.5)};
    const Matrix3c h_i = h_rotating(p, d, &sig, noise, t, false);
    CHECK(hermiticity_error(h_i) < 1e-10);
    const Matrix3c lhs = h_i + h_lab(p, 0.0, 0.0);
    const Matrix3c rhs = h_lab_driven(p, d, &sig, noise, t);
    const Eigen::Vector3d ev_l = hermitian_eigensystem(lhs).values;
    const Eigen::Vector3d ev_r = hermitian_eigensystem(rhs).values;
    CHECK((ev_l - ev_r).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + p.d));
  }
}

TEST_CASE("builders stay Hermitian on random parameter draws") {
  SplitMix64 rng{8080};
  for (int i = 0; i < 1000; ++i) {
    const StaticParams p{rand_in(rng, 0.0, 2e4), rand_in(rng, 1.0, 1e3),
                         rand_in(rng, -20.0, 20.0)};
    DriveParams d;
    const double pick = rng.uniform();
    d.scheme = pick < 0.25   ? DriveScheme::None
               : pick < 0.5  ? DriveScheme::Linear
               : pick < 0.75 ? DriveScheme::Orthogonal
                             : DriveScheme::PhaseModulated;
    if (d.scheme != DriveScheme::None) d.omega1 = rand_in(rng, 1.0, 400.0);
    if (d.scheme == DriveScheme::PhaseModulated) d.omega2 = d.omega1 / rand_in(rng, 5.0, 20.0);
    const SignalParams sig{rand_in(rng, 0.0, 2.0), rand_in(rng, 0.1, 500.0)};
    const NoiseValues noise{rand_in(rng, -2.0, 2.0), rand_in(rng, -2.0, 2.0)};
    const double t = rand_in(rng, 0.0, 5.0);
    CHECK(hermiticity_error(h_lab(p, noise.delta_e, 0.1)) < 1e-12);
    CHECK(hermiticity_error(h_lab_driven(p, d, &sig, noise, t)) < 1e-12);
    CHECK(hermiticity_error(h_rotating(p, d, &sig, noise, t, true)) < 1e-12);
    CHECK(hermiticity_error(h_rotating(p, d, &sig, noise, t, false)) < 1e-10);
  }
}

TEST_CASE("drive guards") {
  const StaticParams p{0.0, kTwoPi * 24.0, 0.0};
  DriveParams d;
  d.scheme = DriveScheme::PhaseModulated;
  d.omega1 = kTwoPi * 10.0;
  d.omega2 = kTwoPi * 10.0;  // equal amplitudes: modulation guard trips
  CHECK_THROWS_AS(check_drive(p, d), PhysicsGuardError);
  d.omega2 = kTwoPi * 2.0;  // exactly omega1/5
  CHECK_NOTHROW(check_drive(p, d));
  d.omega2 = kTwoPi * 2.1;
  CHECK_THROWS_AS(check_drive(p, d), PhysicsGuardError);

  DriveParams lin;
  lin.scheme = DriveScheme::Linear;
  lin.omega1 = kTwoPi * 10.0;
  lin.omega2 = 1.0;  // only the phase-modulated scheme takes omega2
  CHECK_THROWS_AS(check_drive(p, lin), std::invalid_argument);

  CHECK(clock_regime_warning(StaticParams{0.0, 10.0, 5.0}).has_value());
  CHECK_FALSE(clock_regime_warning(StaticParams{0.0, 100.0, 5.0}).has_value());
  CHECK(sensing_validity_warning(p, SignalParams{kTwoPi * 20.0, kTwoPi * 5.0}).has_value());
  CHECK_FALSE(
      sensing_validity_warning(p, SignalParams{kTwoPi * 0.1, kTwoPi * 5.0}).has_value());

  DriveParams defaults;
  const StaticParams nv{kTwoPi * 2870.0, kTwoPi * 24.0, 0.0};
  CHECK(defaults.resolved_mw1(nv) == doctest::Approx(kTwoPi * 2894.0));
  CHECK(defaults.resolved_mw2(nv) == doctest::Approx(kTwoPi * 2846.0));
}
