#include "spinsim/hamiltonians.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spinsim/errors.hpp"

namespace spinsim {

void check_drive(const StaticParams& p, const DriveParams& d) {
  switch (d.scheme) {
    case DriveScheme::None:
      if (d.omega1 != 0.0 || d.omega2 != 0.0) {
        throw std::invalid_argument("check_drive: scheme None takes no drive amplitudes");
      }
      break;
    case DriveScheme::Linear:
    case DriveScheme::Orthogonal:
      if (!(d.omega1 > 0.0)) {
        throw std::invalid_argument("check_drive: omega1 must be positive");
      }
      if (d.omega2 != 0.0) {
        throw std::invalid_argument("check_drive: omega2 is only used by PhaseModulated");
      }
      break;
    case DriveScheme::PhaseModulated:
      if (!(d.omega1 > 0.0) || !(d.omega2 > 0.0)) {
        throw std::invalid_argument("check_drive: PhaseModulated needs omega1, omega2 > 0");
      }
      if (d.omega2 * d.pm_ratio_guard > d.omega1 * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "phase modulation requires omega2 <= omega1/" << d.pm_ratio_guard;
        throw PhysicsGuardError("drive-ratio", msg.str());
      }
      break;
  }
  if (d.scheme != DriveScheme::None && !(p.ex > 0.0)) {
    throw std::invalid_argument("check_drive: driven schemes require Ex > 0");
  }
}

std::optional<std::string> clock_regime_warning(const StaticParams& p) {
  if (p.ex < 10.0 * std::abs(p.gamma_bz)) {
    std::ostringstream msg;
    msg << "clock regime weak: Ex = " << p.ex << " rad/us < 10*|gamma_e Bz| = "
        << 10.0 * std::abs(p.gamma_bz);
    return msg.str();
  }
  return std::nullopt;
}

std::optional<std::string> sensing_validity_warning(const StaticParams& p,
                                                    const SignalParams& s) {
  if (s.g < 0.0) throw std::invalid_argument("signal strength g must be non-negative");
  std::ostringstream msg;
  if (4.0 * p.ex < 20.0 * s.g) {
    msg << "sensing validity: 4*Ex = " << 4.0 * p.ex << " not >> g = " << s.g;
    return msg.str();
  }
  if (2.0 * s.omega_ac < 20.0 * s.g && s.g > 0.0) {
    msg << "sensing validity: 2*omega_ac = " << 2.0 * s.omega_ac << " not >> g = " << s.g;
    return msg.str();
  }
  return std::nullopt;
}

Matrix3c h_lab(const StaticParams& p, double delta_e, double delta_bz) {
  const double e = p.ex + delta_e;
  const double b = p.gamma_bz + delta_bz;
  Matrix3c h = Matrix3c::Zero();
  h(0, 0) = p.d + b;
  h(2, 2) = p.d - b;
  h(0, 2) = e;
  h(2, 0) = e;
  return h;
}

Matrix3c h_lab_driven(const StaticParams& p, const DriveParams& d,
                      const SignalParams* signal, const NoiseValues& noise, double t) {
  Matrix3c h = h_lab(p, noise.delta_e, 0.0);
  const double w1 = d.resolved_mw1(p);
  const double w2 = d.resolved_mw2(p);
  const double amp = d.omega1 + noise.delta_omega1;
  const Matrix3c& sx = spin_operator(Spin1Op::Sx);
  const Matrix3c& sy = spin_operator(Spin1Op::Sy);
  switch (d.scheme) {
    case DriveScheme::None:
      break;
    case DriveScheme::Linear:
      h += 2.0 * amp * std::cos(w1 * t) * sx;
      break;
    case DriveScheme::Orthogonal:
      h += std::sqrt(2.0) * amp * (std::cos(w1 * t) * sx + std::sin(w2 * t) * sy);
      break;
    case DriveScheme::PhaseModulated: {
      const double phi = phase_modulation(t, d.omega1, d.omega2);
      h += std::sqrt(2.0) * amp * (std::cos(w1 * t + phi) * sx + std::sin(w2 * t + phi) * sy);
      break;
    }
  }
  if (signal != nullptr) {
    h += signal->g * std::cos(signal->omega_ac * t) * spin_operator(Spin1Op::Sz);
  }
  return h;
}

AnalyticEigensystem analytic_eigensystem(const StaticParams& p, double delta_e,
                                         double delta_bz) {
  const double e = p.ex + delta_e;
  const double b = p.gamma_bz + delta_bz;
  const double r = std::hypot(e, b);
  AnalyticEigensystem sys;
  sys.psi_zero = ket0();
  if (r == 0.0) {
    sys.degenerate = true;
    sys.omega_plus = p.d;
    sys.omega_minus = p.d;
    sys.omega_zero = 0.0;
    sys.theta = 0.0;
    sys.psi_plus = ket_plus1();
    sys.psi_minus = ket_minus1();
    return sys;
  }
  sys.omega_plus = p.d + r;
  sys.omega_minus = p.d - r;
  sys.omega_zero = 0.0;
  sys.theta = std::atan2(e, b);
  const double ch = std::cos(0.5 * sys.theta);
  const double sh = std::sin(0.5 * sys.theta);
  sys.psi_plus = ch * ket_plus1() + sh * ket_minus1();
  sys.psi_minus = -sh * ket_plus1() + ch * ket_minus1();
  return sys;
}

double phase_modulation(double t, double omega1, double omega2) {
  if (!(omega1 > 0.0)) throw std::invalid_argument("phase_modulation: omega1 must be positive");
  return 2.0 * (omega2 / omega1) * std::sin(2.0 * omega1 * t);
}

namespace {

// exp(i H0' t) in the computational basis, H0' = D Sz^2 + Ex (Sx^2 - Sy^2).
Matrix3c frame_unitary(const StaticParams& p, double t) {
  const Complex a = std::polar(1.0, (p.d + p.ex) * t);
  const Complex b = std::polar(1.0, (p.d - p.ex) * t);
  Matrix3c u = Matrix3c::Zero();
  u(0, 0) = 0.5 * (a + b);
  u(0, 2) = 0.5 * (a - b);
  u(2, 0) = 0.5 * (a - b);
  u(2, 2) = 0.5 * (a + b);
  u(1, 1) = 1.0;
  return u;
}

}  // namespace

Matrix3c h_rotating(const StaticParams& p, const DriveParams& d, const SignalParams* signal,
                    const NoiseValues& noise, double t, bool rwa) {
  if (!rwa) {
    const Matrix3c h0p = h_lab(p, 0.0, 0.0);
    const Matrix3c u = frame_unitary(p, t);
    return u * (h_lab_driven(p, d, signal, noise, t) - h0p) * u.adjoint();
  }

  Matrix3c h = Matrix3c::Zero();
  h(0, 2) = noise.delta_e;
  h(2, 0) = noise.delta_e;
  const double amp = d.omega1 + noise.delta_omega1;
  switch (d.scheme) {
    case DriveScheme::None:
      break;
    case DriveScheme::Linear: {
      const double s = amp / std::sqrt(2.0);
      h(0, 1) += s;
      h(1, 0) += s;
      h(1, 2) += s;
      h(2, 1) += s;
      break;
    }
    case DriveScheme::Orthogonal:
      h(0, 1) += amp;
      h(1, 0) += amp;
      break;
    case DriveScheme::PhaseModulated: {
      const double phi = phase_modulation(t, d.omega1, d.omega2);
      const Complex coupling = amp * std::polar(1.0, -phi);
      h(0, 1) += coupling;
      h(1, 0) += std::conj(coupling);
      break;
    }
  }
  if (signal != nullptr) {
    const double s =
        signal->g * std::cos(2.0 * p.ex * t) * std::cos(signal->omega_ac * t);
    h(0, 0) += 0.5 * s;
    h(1, 1) -= 0.5 * s;
  }
  return h;
}

}  // namespace spinsim
