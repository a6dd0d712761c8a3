#pragma once

// Spin-1 operator algebra, states and small dense Hermitian linear algebra.
// Everything here is a plain value type; nothing holds mutable shared state.

#include <array>
#include <stdexcept>

#include "spinsim/types.hpp"

namespace spinsim {

// A normalized complex 3-vector in the (|+1>, |0>, |-1>) basis.
using SpinState = Vector3c;

enum class Spin1Op { Sx, Sy, Sz, Sz2, SxSqMinusSySq };

// Standard dimensionless spin-1 matrices in the (|+1>,|0>,|-1>) ordering.
// Sx couples (|+1>,|0>) and (|-1>,|0>) with entries 1/sqrt(2);
// Sz = diag(1, 0, -1); SxSqMinusSySq = |+1><-1| + |-1><+1|.
const Matrix3c& spin_operator(Spin1Op which);

SpinState ket_plus1();
SpinState ket0();
SpinState ket_minus1();

// Frobenius norm of (A - A^dagger) relative to max(1, ||A||_F).
double hermiticity_error(const Matrix3c& a);
// ||U^dagger U - I||_F.
double unitarity_error(const Matrix3c& u);

bool is_hermitian(const Matrix3c& a, double tol = 1e-12);
bool is_normalized(const SpinState& psi, double tol = 1e-9);

// <psi|op|psi> for Hermitian op. Throws std::invalid_argument if the
// imaginary part of the quadratic form exceeds 1e-10 (non-Hermitian input).
double expectation(const SpinState& psi, const Matrix3c& op);

struct Eigensystem3 {
  Eigen::Vector3d values;  // ascending
  Matrix3c vectors;        // column k belongs to values[k]; orthonormal
};

// Eigendecomposition of a Hermitian 3x3. Uses a closed-form (Cardano +
// cross-product eigenvectors) fast path and falls back to the iterative
// solver when the spectrum is nearly degenerate.
Eigensystem3 hermitian_eigensystem(const Matrix3c& h);

// U = exp(-i h dt) for Hermitian h, via eigendecomposition, so U is unitary
// up to roundoff. Throws std::invalid_argument for non-Hermitian input.
Matrix3c matrix_exponential_skew(const Matrix3c& h, double dt);

// psi -> exp(-i h dt) psi without forming the full matrix exponential.
SpinState apply_exponential_skew(const Matrix3c& h, double dt, const SpinState& psi);

// Same closed-form machinery for the 2x2 blocks used by the effective models.
Matrix2c matrix_exponential_skew2(const Matrix2c& h, double dt);
Vector2c apply_exponential_skew2(const Matrix2c& h, double dt, const Vector2c& psi);

}  // namespace spinsim
