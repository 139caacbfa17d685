#pragma once

#include <vector>

#include <Eigen/Dense>

namespace entvis::fit {

/// Least-squares fit of y ~ offset + amplitude * sin(x + phase) at unit
/// angular frequency. Linear in the (offset, sin, cos) coefficients, so the
/// solve is exact.
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double residual_rms = 0.0;
  Eigen::Vector3d coef = Eigen::Vector3d::Zero();  // (offset, sin, cos)
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();   // coefficient covariance (weighted fits)
};

SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y);

/// Weighted variant; w are inverse variances. The covariance block is
/// (X^T W X)^{-1}, i.e. treats the weights as known.
SinusoidFit fit_sinusoid_weighted(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& w);

}  // namespace entvis::fit
