#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdd {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat6 = Eigen::Matrix<cplx, 6, 6>;
// Auxiliary state (u; y_L; y_R) stacked as a 6x2 block.
using AuxState = Eigen::Matrix<cplx, 6, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

enum class Reservoir { Left = 0, Right = 1 };
inline constexpr Reservoir kReservoirs[] = {Reservoir::Left, Reservoir::Right};

// Dot index a reservoir couples to in the serial geometry.
inline constexpr int coupled_dot(Reservoir r) { return static_cast<int>(r); }

inline const char* name(Reservoir r) { return r == Reservoir::Left ? "L" : "R"; }

/// Invalid input or configuration (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver or physicality failure (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdd
