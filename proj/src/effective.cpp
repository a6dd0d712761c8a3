#include "spinsim/effective.hpp"

#include <cmath>
#include <stdexcept>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {

Matrix2c pauli_x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}

Matrix2c pauli_y() {
  Matrix2c m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix2c pauli_z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TwoLevelBasis scheme_basis(TwoLevelBasisTag tag) {
  const double s = 1.0 / std::sqrt(2.0);
  TwoLevelBasis basis;
  basis.tag = tag;
  switch (tag) {
    case TwoLevelBasisTag::ClockC:
      basis.upper = s * (ket_minus1() + ket_plus1());
      basis.lower = s * (ket_minus1() - ket_plus1());
      break;
    case TwoLevelBasisTag::LinearL:
      // |mu>_l and the dressed partner whose splitting realizes the
      // linear-drive gap formula; at dE = 0 the partner is
      // ((|+1>+|-1>)/sqrt(2) + |0>)/sqrt(2).
      basis.upper = s * (-ket_plus1() + ket_minus1());
      basis.lower = 0.5 * ket_plus1() + s * ket0() + 0.5 * ket_minus1();
      break;
    case TwoLevelBasisTag::OrthogonalO:
      basis.upper = s * (ket0() + ket_plus1());
      basis.lower = s * (ket0() - ket_plus1());
      break;
    case TwoLevelBasisTag::PhaseModP:
      basis.upper = ket_plus1();
      basis.lower = ket0();
      break;
  }
  return basis;
}

TwoLevelBasis scheme_basis(DriveScheme scheme) {
  switch (scheme) {
    case DriveScheme::None: return scheme_basis(TwoLevelBasisTag::ClockC);
    case DriveScheme::Linear: return scheme_basis(TwoLevelBasisTag::LinearL);
    case DriveScheme::Orthogonal: return scheme_basis(TwoLevelBasisTag::OrthogonalO);
    case DriveScheme::PhaseModulated: return scheme_basis(TwoLevelBasisTag::PhaseModP);
  }
  throw std::invalid_argument("scheme_basis: unknown scheme");
}

SpinState superposition_state(const TwoLevelBasis& basis) {
  return (basis.upper + basis.lower) / std::sqrt(2.0);
}

Matrix3c two_sigma_x_op(const TwoLevelBasis& basis) {
  Matrix3c op = basis.upper * basis.lower.adjoint();
  op += op.adjoint().eval();
  return op;
}

double gap_clock(double ex, double delta_e) { return 2.0 * (ex + delta_e); }

double gap_linear(double omega, double delta_e) {
  if (!(omega > 0.0)) throw std::invalid_argument("gap_linear: omega must be positive");
  return -1.5 * delta_e - 0.5 * std::sqrt(4.0 * omega * omega + delta_e * delta_e);
}

double gap_linear_expansion(double omega, double delta_e) {
  if (!(omega > 0.0)) throw std::invalid_argument("gap_linear: omega must be positive");
  return -1.5 * delta_e - omega - delta_e * delta_e / (8.0 * omega);
}

double gap_orthogonal(double omega, double delta_e) {
  if (!(omega > 0.0)) throw std::invalid_argument("gap_orthogonal: omega must be positive");
  return 2.0 * std::hypot(omega, delta_e);
}

double second_order_shift(double delta_e, double omega1) {
  return delta_e * delta_e / (2.0 * omega1);
}

double TwoLevelModel::gap() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }

Matrix2c TwoLevelModel::matrix() const {
  return 0.5 * (sx * pauli_x() + sy * pauli_y() + sz * pauli_z());
}

TwoLevelModel effective_phasemod(double omega1, double omega2, double delta_e,
                                 double delta_omega1) {
  if (!(omega2 < omega1)) {
    throw std::invalid_argument("effective_phasemod: requires omega2 < omega1");
  }
  TwoLevelModel model;
  model.tag = TwoLevelBasisTag::PhaseModP;
  model.sx = 2.0 * (second_order_shift(delta_e, omega1) + delta_omega1);
  model.sy = 0.0;
  model.sz = 2.0 * omega2;
  return model;
}

double resonant_omega1(double ex, double omega_ac, double ratio) {
  if (!(ratio > 0.0)) throw std::invalid_argument("resonant_omega1: ratio must be positive");
  const double omega1 = (2.0 * ex - omega_ac) / (2.0 * (1.0 + 1.0 / ratio));
  if (!(omega1 > 0.0)) {
    throw PhysicsGuardError("detection-band", "frequency above detectable band: omega_ac >= 2 Ex");
  }
  return omega1;
}

Matrix2c effective_sensing_h(double omega1, double omega2, double ex,
                             const SignalParams& signal, double delta_e,
                             double delta_omega1, double t) {
  TwoLevelModel base = effective_phasemod(omega1, omega2, delta_e, delta_omega1);
  const double mod =
      signal.g * std::cos(2.0 * ex * t) * std::cos(signal.omega_ac * t);
  Matrix2c h = base.matrix();
  h += 0.5 * mod * (std::cos(2.0 * omega1 * t) * pauli_z() -
                    std::sin(2.0 * omega1 * t) * pauli_y());
  return h;
}

Matrix2c first_frame_phasemod_h(double omega1, double omega2, const SignalParams* signal,
                                double ex, double delta_e, double delta_omega1, double t) {
  const double phi = phase_modulation(t, omega1, omega2);
  const double amp = omega1 + second_order_shift(delta_e, omega1) + delta_omega1;
  Matrix2c h = amp * (std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y());
  if (signal != nullptr) {
    h += 0.5 * signal->g * std::cos(2.0 * ex * t) * std::cos(signal->omega_ac * t) * pauli_z();
  }
  return h;
}

Matrix2c second_frame_transform(const Matrix2c& h_first, double omega1, double t) {
  const double angle = omega1 * t;  // exp(-i 2 Omega1 sigma_x t) = exp(-i Omega1 t Pauli_x)
  Matrix2c r = std::cos(angle) * Matrix2c::Identity() -
               Complex(0, 1) * std::sin(angle) * pauli_x();
  return r.adjoint() * (h_first - omega1 * pauli_x()) * r;
}

}  // namespace spinsim
