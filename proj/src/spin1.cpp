#include "spinsim/spin1.hpp"

#include <algorithm>
#include <cmath>

namespace spinsim {

namespace {

Matrix3c make_sx() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix3c m = Matrix3c::Zero();
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 2) = s;
  m(2, 1) = s;
  return m;
}

Matrix3c make_sy() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Matrix3c m = Matrix3c::Zero();
  m(0, 1) = -i * s;
  m(1, 0) = i * s;
  m(1, 2) = -i * s;
  m(2, 1) = i * s;
  return m;
}

Matrix3c make_sz() {
  Matrix3c m = Matrix3c::Zero();
  m(0, 0) = 1.0;
  m(2, 2) = -1.0;
  return m;
}

Matrix3c make_sz2() {
  Matrix3c m = Matrix3c::Zero();
  m(0, 0) = 1.0;
  m(2, 2) = 1.0;
  return m;
}

Matrix3c make_sx2_minus_sy2() {
  Matrix3c m = Matrix3c::Zero();
  m(0, 2) = 1.0;
  m(2, 0) = 1.0;
  return m;
}

// Formal (unconjugated) cross product; a row-null-space vector of a rank-2
// complex matrix is the cross product of two independent rows.
Vector3c cross_formal(const Vector3c& a, const Vector3c& b) {
  Vector3c v;
  v(0) = a(1) * b(2) - a(2) * b(1);
  v(1) = a(2) * b(0) - a(0) * b(2);
  v(2) = a(0) * b(1) - a(1) * b(0);
  return v;
}

// Best-conditioned null vector of (h - lambda I); returns squared norm ratio
// used as a quality measure.
bool null_vector(const Matrix3c& h, double lambda, Vector3c* out) {
  Matrix3c k = h;
  k(0, 0) -= lambda;
  k(1, 1) -= lambda;
  k(2, 2) -= lambda;
  const Vector3c r0 = k.row(0).transpose();
  const Vector3c r1 = k.row(1).transpose();
  const Vector3c r2 = k.row(2).transpose();
  Vector3c best = cross_formal(r0, r1);
  double best_n = best.squaredNorm();
  double best_scale = r0.squaredNorm() * r1.squaredNorm();
  Vector3c c = cross_formal(r0, r2);
  if (c.squaredNorm() > best_n) {
    best = c;
    best_n = c.squaredNorm();
    best_scale = r0.squaredNorm() * r2.squaredNorm();
  }
  c = cross_formal(r1, r2);
  if (c.squaredNorm() > best_n) {
    best = c;
    best_n = c.squaredNorm();
    best_scale = r1.squaredNorm() * r2.squaredNorm();
  }
  if (best_scale <= 0.0 || best_n < 1e-20 * best_scale) return false;
  *out = best / std::sqrt(best_n);
  return true;
}

Eigensystem3 eigensystem_iterative(const Matrix3c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> solver(h);
  return Eigensystem3{solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

const Matrix3c& spin_operator(Spin1Op which) {
  static const Matrix3c sx = make_sx();
  static const Matrix3c sy = make_sy();
  static const Matrix3c sz = make_sz();
  static const Matrix3c sz2 = make_sz2();
  static const Matrix3c sxy = make_sx2_minus_sy2();
  switch (which) {
    case Spin1Op::Sx: return sx;
    case Spin1Op::Sy: return sy;
    case Spin1Op::Sz: return sz;
    case Spin1Op::Sz2: return sz2;
    case Spin1Op::SxSqMinusSySq: return sxy;
  }
  throw std::invalid_argument("unknown spin operator");
}

SpinState ket_plus1() { return Vector3c(1.0, 0.0, 0.0); }
SpinState ket0() { return Vector3c(0.0, 1.0, 0.0); }
SpinState ket_minus1() { return Vector3c(0.0, 0.0, 1.0); }

double hermiticity_error(const Matrix3c& a) {
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() / scale;
}

double unitarity_error(const Matrix3c& u) {
  return (u.adjoint() * u - Matrix3c::Identity()).norm();
}

bool is_hermitian(const Matrix3c& a, double tol) { return hermiticity_error(a) <= tol; }

bool is_normalized(const SpinState& psi, double tol) {
  return std::abs(psi.norm() - 1.0) <= tol;
}

double expectation(const SpinState& psi, const Matrix3c& op) {
  const Complex value = psi.dot(op * psi);  // Eigen's dot conjugates the left argument
  const double scale = std::max(1.0, std::abs(value.real()));
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw std::invalid_argument("expectation: operator is not Hermitian");
  }
  return value.real();
}

Eigensystem3 hermitian_eigensystem(const Matrix3c& h) {
  const double off = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
  const double q = (h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0;
  if (off == 0.0) {
    Eigensystem3 sys;
    std::array<int, 3> order{0, 1, 2};
    std::array<double, 3> d{h(0, 0).real(), h(1, 1).real(), h(2, 2).real()};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    sys.vectors = Matrix3c::Zero();
    for (int k = 0; k < 3; ++k) {
      sys.values(k) = d[order[k]];
      sys.vectors(order[k], k) = 1.0;
    }
    return sys;
  }

  // Cardano eigenvalues of the shifted, scaled matrix.
  const double p2 = std::pow(h(0, 0).real() - q, 2) + std::pow(h(1, 1).real() - q, 2) +
                    std::pow(h(2, 2).real() - q, 2) + 2.0 * off;
  const double p = std::sqrt(p2 / 6.0);
  Matrix3c b = h;
  b(0, 0) -= q;
  b(1, 1) -= q;
  b(2, 2) -= q;
  b /= p;
  const Complex detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                       b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                       b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  double r = 0.5 * detb.real();
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e_hi = q + 2.0 * p * std::cos(phi);
  const double e_lo = q + 2.0 * p * std::cos(phi + kTwoPi / 3.0);
  const double e_mid = 3.0 * q - e_hi - e_lo;
  Eigen::Vector3d vals(e_lo, e_mid, e_hi);

  // Nearly degenerate spectra are better served by the iterative solver.
  const double scale = std::max({std::abs(e_lo), std::abs(e_hi), 1e-300});
  const double sep = std::min(vals(1) - vals(0), vals(2) - vals(1));
  if (sep < 1e-6 * scale) return eigensystem_iterative(h);

  Vector3c v0, v2;
  if (!null_vector(h, vals(0), &v0) || !null_vector(h, vals(2), &v2)) {
    return eigensystem_iterative(h);
  }
  v2 -= v0 * v0.dot(v2);
  const double n2 = v2.norm();
  if (n2 < 1e-6) return eigensystem_iterative(h);
  v2 /= n2;
  const Vector3c v1 = cross_formal(v0, v2).conjugate();

  Eigensystem3 sys;
  sys.values = vals;
  sys.vectors.col(0) = v0;
  sys.vectors.col(1) = v1;
  sys.vectors.col(2) = v2;
  return sys;
}

Matrix3c matrix_exponential_skew(const Matrix3c& h, double dt) {
  if (!is_hermitian(h, 1e-10)) {
    throw std::invalid_argument("matrix_exponential_skew: input is not Hermitian");
  }
  const Eigensystem3 sys = hermitian_eigensystem(h);
  Vector3c phases;
  for (int k = 0; k < 3; ++k) {
    phases(k) = std::polar(1.0, -sys.values(k) * dt);
  }
  return sys.vectors * phases.asDiagonal() * sys.vectors.adjoint();
}

SpinState apply_exponential_skew(const Matrix3c& h, double dt, const SpinState& psi) {
  const Eigensystem3 sys = hermitian_eigensystem(h);
  Vector3c coeff = sys.vectors.adjoint() * psi;
  for (int k = 0; k < 3; ++k) {
    coeff(k) *= std::polar(1.0, -sys.values(k) * dt);
  }
  return sys.vectors * coeff;
}

Matrix2c matrix_exponential_skew2(const Matrix2c& h, double dt) {
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-10 * scale) {
    throw std::invalid_argument("matrix_exponential_skew2: input is not Hermitian");
  }
  const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double dz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const Complex b = h(0, 1);
  const double radius = std::sqrt(dz * dz + std::norm(b));
  const Complex phase = std::polar(1.0, -mean * dt);
  Matrix2c u;
  if (radius == 0.0) {
    u = phase * Matrix2c::Identity();
    return u;
  }
  const double c = std::cos(radius * dt);
  const Complex is = Complex(0.0, -1.0) * std::sin(radius * dt) / radius;
  u(0, 0) = phase * (c + is * dz);
  u(0, 1) = phase * (is * b);
  u(1, 0) = phase * (is * std::conj(b));
  u(1, 1) = phase * (c - is * dz);
  return u;
}

Vector2c apply_exponential_skew2(const Matrix2c& h, double dt, const Vector2c& psi) {
  const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double dz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const Complex b = h(0, 1);
  const double radius = std::sqrt(dz * dz + std::norm(b));
  const Complex phase = std::polar(1.0, -mean * dt);
  if (radius == 0.0) return phase * psi;
  const double c = std::cos(radius * dt);
  const Complex is = Complex(0.0, -1.0) * std::sin(radius * dt) / radius;
  Vector2c out;
  out(0) = phase * ((c + is * dz) * psi(0) + is * b * psi(1));
  out(1) = phase * (is * std::conj(b) * psi(0) + (c - is * dz) * psi(1));
  return out;
}

}  // namespace spinsim
