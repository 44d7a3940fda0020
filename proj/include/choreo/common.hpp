#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace choreo {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Thrown when a configuration cannot converge (collision approach, Newton
// failure, fold step collapse). Carries the last residual for diagnostics.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Invalid physical input: separations below the collision radius, bad
// potential parameters, malformed trajectories.
class domain_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (CLI/config file).
class config_error : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kCollisionRadius = 1e-8;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace choreo
