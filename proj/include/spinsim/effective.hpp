#pragma once

// Closed-form effective two-level models for the four control schemes, used
// both as fast oracles against the full 3-level integrator and as the
// simulation engine for AC sensing.

#include "spinsim/hamiltonians.hpp"
#include "spinsim/spin1.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

enum class TwoLevelBasisTag { ClockC, LinearL, OrthogonalO, PhaseModP };

// Noise-free embeddings of the scheme's two-level basis into the 3-level
// space. "upper" is the state written first in the coherence observable
// (|mu_(+)> in the clock/orthogonal/phase-modulated schemes, |mu>_l in the
// linear scheme).
struct TwoLevelBasis {
  TwoLevelBasisTag tag;
  SpinState upper;
  SpinState lower;
};

TwoLevelBasis scheme_basis(TwoLevelBasisTag tag);
TwoLevelBasis scheme_basis(DriveScheme scheme);

// (upper + lower)/sqrt(2): the initial state of the dephasing experiments.
SpinState superposition_state(const TwoLevelBasis& basis);

// 2 sigma_x in the scheme basis as a 3x3 operator: |u><l| + |l><u|.
Matrix3c two_sigma_x_op(const TwoLevelBasis& basis);

// Gap of the clock pair: 2 (Ex + dE).
double gap_clock(double ex, double delta_e);

// Gap of the {|mu>_l, |mu->_l} pair under a linear drive:
// -(3/2) dE - (1/2) sqrt(4 Omega^2 + dE^2), and its small-dE expansion
// -(3/2) dE - Omega - dE^2/(8 Omega).
double gap_linear(double omega, double delta_e);
double gap_linear_expansion(double omega, double delta_e);

// Gap of the orthogonal-drive pair: 2 sqrt(Omega^2 + dE^2).
double gap_orthogonal(double omega, double delta_e);

// Second-order system-noise shift dE' = dE^2 / (2 Omega1), recomputed per
// noise sample.
double second_order_shift(double delta_e, double omega1);

// H = sx sigma_x + sy sigma_y + sz sigma_z with sigma_i = Pauli_i / 2.
struct TwoLevelModel {
  TwoLevelBasisTag tag;
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double gap() const;
  Matrix2c matrix() const;
};

// Doubly-dressed model of the phase-modulated scheme:
// 2 [dE' + dOmega1] sigma_x + 2 Omega2 sigma_z. Throws if omega2 >= omega1.
TwoLevelModel effective_phasemod(double omega1, double omega2, double delta_e,
                                 double delta_omega1);

// Resonant first-drive amplitude for a target signal frequency, with
// omega2 = omega1 / ratio locked: omega1 = (2 Ex - omega_ac) / (2 (1 + 1/ratio)).
// Throws std::domain_error("frequency above detectable band") if omega_ac >= 2 Ex.
double resonant_omega1(double ex, double omega_ac, double ratio);

// Time-dependent two-level sensing Hamiltonian in the doubly-dressed frame,
// basis {|+1>, |0>}:
//   2 [dE' + dOmega1] sigma_x + 2 Omega2 sigma_z
//   + g cos(2 Ex t) cos(omega_ac t) [sigma_z cos(2 Omega1 t) - sigma_y sin(2 Omega1 t)].
Matrix2c effective_sensing_h(double omega1, double omega2, double ex,
                             const SignalParams& signal, double delta_e,
                             double delta_omega1, double t);

// First-interaction-picture two-level Hamiltonian of the phase-modulated
// drive (exact in phi): 2 (Omega1 + dOmega1) [cos(phi) sigma_x + sin(phi) sigma_y]
// (+ the dE' correction on sigma_x), with the sensing term when given.
Matrix2c first_frame_phasemod_h(double omega1, double omega2, const SignalParams* signal,
                                double ex, double delta_e, double delta_omega1, double t);

// Frame change into the second interaction picture: R^dag (h - 2 Omega1 sigma_x) R
// with R = exp(-i 2 Omega1 sigma_x t).
Matrix2c second_frame_transform(const Matrix2c& h_first, double omega1, double t);

}  // namespace spinsim
