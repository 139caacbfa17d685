#include "entvis/fit.hpp"

#include <cmath>

#include "entvis/errors.hpp"

namespace entvis::fit {

namespace {

SinusoidFit solve(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>* w) {
  if (x.size() != y.size() || (w && w->size() != x.size()))
    throw ValidationError("sinusoid fit: input lengths differ");
  if (x.size() < 3) throw ValidationError("sinusoid fit: need at least 3 samples");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n), wv = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::sin(x[static_cast<std::size_t>(i)]);
    design(i, 2) = std::cos(x[static_cast<std::size_t>(i)]);
    rhs(i) = y[static_cast<std::size_t>(i)];
    if (w) wv(i) = (*w)[static_cast<std::size_t>(i)];
  }
  const Eigen::Matrix3d normal = design.transpose() * wv.asDiagonal() * design;
  const Eigen::Vector3d b = design.transpose() * (wv.asDiagonal() * rhs);
  Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("sinusoid fit: singular normal equations");
  SinusoidFit f;
  f.coef = ldlt.solve(b);
  f.cov = ldlt.solve(Eigen::Matrix3d::Identity());
  f.offset = f.coef(0);
  f.amplitude = std::hypot(f.coef(1), f.coef(2));
  f.phase = std::atan2(f.coef(2), f.coef(1));
  f.residual_rms = std::sqrt((design * f.coef - rhs).squaredNorm() / static_cast<double>(n));
  return f;
}

}  // namespace

SinusoidFit fit_sinusoid(const std::vector<double>& x, const std::vector<double>& y) {
  return solve(x, y, nullptr);
}

SinusoidFit fit_sinusoid_weighted(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& w) {
  return solve(x, y, &w);
}

}  // namespace entvis::fit
