#pragma once

// Unit conventions used throughout the library:
//   - all frequencies are angular frequencies in rad/us ("(2pi) x f MHz" is
//     stored as 2*pi*f),
//   - all times are in us,
//   - basis ordering for spin-1 objects is (|+1>, |0>, |-1>).

#include <complex>

#include <Eigen/Dense>

namespace spinsim {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Matrix2c = Eigen::Matrix2cd;
using Vector3c = Eigen::Vector3cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// "(2pi) x f MHz" -> rad/us.
inline constexpr double mhz(double f) { return kTwoPi * f; }

}  // namespace spinsim
