#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oamturb {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using MatrixXc = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXc = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Propagation medium: both photons through one medium (correlated) or
// through statistically independent media (uncorrelated).
enum class Medium { Uncorrelated, Correlated };

}  // namespace oamturb
