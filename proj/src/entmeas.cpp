#include "entvis/entmeas.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace entvis::entmeas {

using opalg::Basis;
using opalg::ModeLabel;
using opalg::Operator;
using opalg::Particle;
using opalg::Pol;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

const Eigen::Matrix4cd& sigma_y_pair() {
  static const Eigen::Matrix4cd m = [] {
    Eigen::Matrix2cd sy;
    sy << 0.0, -kI, kI, 0.0;
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
    return out;
  }();
  return m;
}

void require_two_qubit_density(const Operator& rho, const char* op_name) {
  if (rho.dim() != 4)
    throw ValidationError(std::string(op_name) + ": expected a 4x4 two-qubit operator");
  if (!opalg::is_hermitian(rho, 1e-8) || std::abs(opalg::trace(rho) - 1.0) > 1e-8)
    throw ValidationError(std::string(op_name) + ": input is not a density operator");
}

}  // namespace

void MixedStateParams::validate() const {
  if (!(i_h >= 0.0 && i_h <= 1.0)) throw ValidationError("state.i_h must lie in [0, 1]");
  if (!(coh >= 0.0 && coh <= 1.0)) throw ValidationError("state.coh must lie in [0, 1]");
  if (!std::isfinite(phi)) throw ValidationError("state.phi must be finite");
}

void EntanglementReport::validate() const {
  if (is_entangled != (ppt_min_eigenvalue < -tol))
    throw NumericalError("report: entanglement flag inconsistent with min eigenvalue");
  for (double c : {concurrence_exact, concurrence_numeric})
    if (c < -1e-12 || c > 1.0 + 1e-12)
      throw NumericalError("report: concurrence outside [0, 1]");
}

Basis two_qubit_basis() {
  std::vector<opalg::LabelTuple> labels;
  for (Pol a : {Pol::H, Pol::V})
    for (Pol b : {Pol::H, Pol::V})
      labels.push_back({ModeLabel{Particle::alpha, 1, a}, ModeLabel{Particle::beta, 1, b}});
  return Basis(labels);
}

Operator build_rho(const MixedStateParams& p) {
  p.validate();
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = p.i_h;
  m(3, 3) = p.i_v();
  m(0, 3) = std::exp(-kI * p.phi) * p.coh * std::sqrt(p.i_h * p.i_v());
  m(3, 0) = std::conj(m(0, 3));
  return Operator(two_qubit_basis(), m);
}

PptResult ppt_criterion(const opalg::Operator& rho, double tol) {
  require_two_qubit_density(rho, "ppt_criterion");
  if (!opalg::is_psd(rho, 1e-8))
    throw ValidationError("ppt_criterion: input is not positive semi-definite");
  auto pt = opalg::partial_transpose(rho, Particle::alpha);
  PptResult res;
  res.eigenvalues = opalg::hermitian_eigenvalues(pt);
  res.min_eigenvalue = res.eigenvalues.back();
  res.is_entangled = res.min_eigenvalue < -tol;
  return res;
}

Operator spin_flip(const opalg::Operator& rho) {
  require_two_qubit_density(rho, "spin_flip");
  const auto& yy = sigma_y_pair();
  return Operator(rho.basis, yy * rho.mat.conjugate() * yy);
}

double concurrence_numeric(const opalg::Operator& rho) {
  require_two_qubit_density(rho, "concurrence_numeric");
  // The square roots of the spin-flip-product eigenvalues are the singular
  // values of B = L^T (sigma_y (x) sigma_y) L with rho = L L^dagger: for
  // symmetric B, eig(rho rho~) = eig(conj(B) B) = sv(B)^2. Computing them as
  // singular values avoids the sqrt blow-up of roundoff at near-zero
  // eigenvalues; negativity of rho itself, beyond clamping range, still
  // signals a bug.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.mat);
  if (es.info() != Eigen::Success)
    throw NumericalError("concurrence_numeric: eigensolver failed");
  Eigen::Vector4d d = es.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (d(i) < -1e-9)
      throw NumericalError("concurrence_numeric: state eigenvalue below the noise floor, "
                           "the spin-flip product would not be positive");
    d(i) = std::sqrt(std::max(d(i), 0.0));
  }
  const Eigen::Matrix4cd factor = es.eigenvectors() * d.asDiagonal();
  const Eigen::Matrix4cd b = factor.transpose() * sigma_y_pair() * factor;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(b);
  const auto& lam = svd.singularValues();  // descending
  return std::max(lam(0) - lam(1) - lam(2) - lam(3), 0.0);
}

double concurrence_exact(const MixedStateParams& p) {
  p.validate();
  return 2.0 * p.coh * std::sqrt(p.i_h * p.i_v());
}

EntanglementReport make_report(const MixedStateParams& p, double tol) {
  auto rho = build_rho(p);
  auto ppt = ppt_criterion(rho, tol);
  EntanglementReport rep;
  rep.ppt_min_eigenvalue = ppt.min_eigenvalue;
  rep.is_entangled = ppt.is_entangled;
  rep.concurrence_exact = concurrence_exact(p);
  rep.concurrence_numeric = concurrence_numeric(rho);
  rep.tol = tol;
  rep.validate();
  return rep;
}

}  // namespace entvis::entmeas
