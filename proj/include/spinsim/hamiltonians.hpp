#pragma once

// Builders for every Hamiltonian used by the simulator: lab frame, first
// rotating frame (with and without the rotating wave approximation), the four
// control schemes and the AC sensing term, plus the closed-form eigen-system
// of the static Hamiltonian.

#include <optional>

#include "spinsim/spin1.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

struct StaticParams {
  double d = 0.0;         // axial ZFS, rad/us
  double ex = 0.0;        // transverse ZFS, rad/us (> 0 in supported scenarios)
  double gamma_bz = 0.0;  // gamma_e * B_z, rad/us
};

enum class DriveScheme { None, Linear, Orthogonal, PhaseModulated };

struct DriveParams {
  DriveScheme scheme = DriveScheme::None;
  double omega1 = 0.0;  // Rabi frequency of the (first) drive, rad/us
  double omega2 = 0.0;  // phase-modulation strength, rad/us; 0 unless PhaseModulated
  // Microwave carrier frequencies; negative means "resonant default"
  // (mw1 = D + Ex, mw2 = D - Ex).
  double mw_freq1 = -1.0;
  double mw_freq2 = -1.0;
  // PhaseModulated requires omega2 <= omega1 / pm_ratio_guard.
  double pm_ratio_guard = 5.0;

  double resolved_mw1(const StaticParams& p) const {
    return mw_freq1 < 0.0 ? p.d + p.ex : mw_freq1;
  }
  double resolved_mw2(const StaticParams& p) const {
    return mw_freq2 < 0.0 ? p.d - p.ex : mw_freq2;
  }
};

struct SignalParams {
  double g = 0.0;         // signal strength, rad/us
  double omega_ac = 0.0;  // signal angular frequency, rad/us
};

struct NoiseValues {
  double delta_e = 0.0;       // system noise sample, rad/us
  double delta_omega1 = 0.0;  // drive-amplitude noise sample, rad/us
};

// Throws std::invalid_argument when a drive/signal precondition is violated
// (e.g. PhaseModulated with omega2 > omega1 / guard). Returns warnings for
// soft guards (clock regime, sensing validity).
void check_drive(const StaticParams& p, const DriveParams& d);
std::optional<std::string> clock_regime_warning(const StaticParams& p);
std::optional<std::string> sensing_validity_warning(const StaticParams& p, const SignalParams& s);

// H = D Sz^2 + (Ex + dE)(Sx^2 - Sy^2) + (gamma_e Bz + dBz) Sz.
Matrix3c h_lab(const StaticParams& p, double delta_e, double delta_bz);

// Lab-frame Hamiltonian including the microwave drive (and signal), used by
// the rwa-off validation path.
Matrix3c h_lab_driven(const StaticParams& p, const DriveParams& d,
                      const SignalParams* signal, const NoiseValues& noise, double t);

struct AnalyticEigensystem {
  // Closed forms: omega_p = D + r, omega_0 = 0, omega_m = D - r with
  // r = sqrt((Ex+dE)^2 + (gBz+dBz)^2); eigenvectors built from theta with
  // cos(theta) = (gBz+dBz)/r.
  double omega_plus = 0.0;
  double omega_zero = 0.0;
  double omega_minus = 0.0;
  double theta = 0.0;
  SpinState psi_plus;
  SpinState psi_minus;
  SpinState psi_zero;
  bool degenerate = false;  // r == 0: the |+-1> pair is degenerate
};

AnalyticEigensystem analytic_eigensystem(const StaticParams& p, double delta_e, double delta_bz);

// phi(t) = 2 (omega2/omega1) sin(2 omega1 t).
double phase_modulation(double t, double omega1, double omega2);

// Interaction-picture Hamiltonian at time t in the frame of
// H0' = D Sz^2 + Ex (Sx^2 - Sy^2).
//
// rwa = true returns the standard RWA forms: for Linear the matrix with
// omega1/sqrt(2) couplings and the delta_e corner coupling; for Orthogonal the
// matrix with an omega1 coupling on (|+1>,|0>) and delta_e on (|+1>,|-1>);
// for PhaseModulated the same with the drive phase exp(-i phi(t)); plus
// g cos(2 Ex t) cos(omega_ac t) * (|+1><+1| - |0><0|)/2 when a signal is
// present. rwa = false returns the exactly transformed Hamiltonian
// exp(i H0' t)(H_lab_driven - H0')exp(-i H0' t), counter-rotating terms
// included.
Matrix3c h_rotating(const StaticParams& p, const DriveParams& d, const SignalParams* signal,
                    const NoiseValues& noise, double t, bool rwa);

}  // namespace spinsim
