#include "entvis/interf.hpp"

#include <cmath>
#include <numbers>

namespace entvis::interf {

using entmeas::MixedStateParams;
using opalg::Basis;
using opalg::Ket;
using opalg::LabelTuple;
using opalg::ModeLabel;
using opalg::Operator;
using opalg::Particle;
using opalg::Pol;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double coh_table(const MixedStateParams& p, Pol mu, Pol nu) {
  return mu == nu ? 1.0 : p.coh;
}

// Within-source coherence phase; H->V carries -phi.
double phase_table(const MixedStateParams& p, Pol mu, Pol nu) {
  if (mu == nu) return 0.0;
  return mu == Pol::H ? -p.phi : p.phi;
}

double intensity(const MixedStateParams& p, Pol mu) { return mu == Pol::H ? p.i_h : p.i_v(); }

// Wave-plate mixing matrix, rows indexed by the source-2 polarization mu and
// columns by the source-1 polarization it maps onto.
Eigen::Matrix2d lambda_matrix(const SetupParams& s) {
  const double c = std::cos(2.0 * s.theta), sn = std::sin(2.0 * s.theta);
  Eigen::Matrix2d m;
  m << s.t_h * c, s.t_h * sn, s.t_v * sn, -s.t_v * c;
  return m;
}

}  // namespace

void SetupParams::validate() const {
  const double norm = std::norm(b1) + std::norm(b2);
  if (std::abs(norm - 1.0) > 1e-12)
    throw ValidationError("setup: |b1|^2 + |b2|^2 must equal 1");
  for (double t : {t_h, t_v})
    if (!(t > 0.0 && t <= 1.0))
      throw ValidationError("setup: transmission amplitudes must lie in (0, 1]");
  for (double x : {theta, xi_hh, xi_vv, xi_hv, xi_vh, phi_alpha, phi_beta})
    if (!std::isfinite(x)) throw ValidationError("setup: phases and angles must be finite");
}

int GeneralTwoSourceCoeffs::idx(Pol mu, int j) {
  if (j != 1 && j != 2) throw ValidationError("source index must be 1 or 2");
  return 2 * (j - 1) + (mu == Pol::H ? 0 : 1);
}

double GeneralTwoSourceCoeffs::p(Pol mu, int j, Pol nu, int k) const {
  return p_[idx(mu, j)][idx(nu, k)];
}

double GeneralTwoSourceCoeffs::xi(Pol mu, int j, Pol nu, int k) const {
  return xi_[idx(mu, j)][idx(nu, k)];
}

GeneralTwoSourceCoeffs GeneralTwoSourceCoeffs::with_cross(const MixedStateParams& p,
                                                          const SetupParams& s, double p_hh,
                                                          double p_vv, double p_hv, double p_vh) {
  p.validate();
  s.validate();
  for (double v : {p_hh, p_vv, p_hv, p_vh})
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("cross-source coherence magnitudes must lie in [0, 1]");
  GeneralTwoSourceCoeffs g;
  const std::array<Pol, 2> pols{Pol::H, Pol::V};
  // Within-source blocks.
  for (int j : {1, 2})
    for (Pol mu : pols)
      for (Pol nu : pols) {
        g.p_[idx(mu, j)][idx(nu, j)] = coh_table(p, mu, nu);
        g.xi_[idx(mu, j)][idx(nu, j)] = phase_table(p, mu, nu);
      }
  // Cross blocks: source 1 -> source 2 stored as given, the reverse direction
  // by symmetry (p symmetric, xi antisymmetric).
  const double pc[2][2] = {{p_hh, p_hv}, {p_vh, p_vv}};
  const double xc[2][2] = {{s.xi_hh, s.xi_hv}, {s.xi_vh, s.xi_vv}};
  for (Pol mu : pols)
    for (Pol nu : pols) {
      const int m = mu == Pol::H ? 0 : 1, n = nu == Pol::H ? 0 : 1;
      g.p_[idx(mu, 1)][idx(nu, 2)] = pc[m][n];
      g.p_[idx(nu, 2)][idx(mu, 1)] = pc[m][n];
      g.xi_[idx(mu, 1)][idx(nu, 2)] = xc[m][n];
      g.xi_[idx(nu, 2)][idx(mu, 1)] = -xc[m][n];
    }
  return g;
}

GeneralTwoSourceCoeffs GeneralTwoSourceCoeffs::coherent(const MixedStateParams& p,
                                                        const SetupParams& s) {
  return with_cross(p, s, 1.0, 1.0, p.coh, p.coh);
}

void GeneralTwoSourceCoeffs::validate(const MixedStateParams& p, double tol) const {
  const std::array<Pol, 2> pols{Pol::H, Pol::V};
  for (Pol mu : pols)
    for (Pol nu : pols)
      for (int j : {1, 2})
        for (int k : {1, 2}) {
          const double pv = p_[idx(mu, j)][idx(nu, k)];
          if (!(pv >= -tol && pv <= 1.0 + tol))
            throw ValidationError("coefficients: magnitude outside [0, 1]");
          if (std::abs(pv - p_[idx(nu, k)][idx(mu, j)]) > tol)
            throw ValidationError("coefficients: magnitude map is not symmetric");
          if (std::abs(xi_[idx(mu, j)][idx(nu, k)] + xi_[idx(nu, k)][idx(mu, j)]) > tol)
            throw ValidationError("coefficients: phase map is not antisymmetric");
          if (j == k) {
            if (std::abs(pv - coh_table(p, mu, nu)) > tol)
              throw ValidationError("coefficients: within-source magnitude must match the "
                                    "single-source coherence table");
            if (std::abs(xi_[idx(mu, j)][idx(nu, j)] - phase_table(p, mu, nu)) > tol)
              throw ValidationError("coefficients: within-source phase must match the "
                                    "single-source phase table");
          }
        }
}

Basis two_source_basis() {
  std::vector<LabelTuple> labels;
  for (int j : {1, 2})
    for (Pol a : {Pol::H, Pol::V})
      for (Pol b : {Pol::H, Pol::V})
        labels.push_back({ModeLabel{Particle::alpha, j, a}, ModeLabel{Particle::beta, j, b}});
  return Basis(labels);
}

Basis beta_out_basis() {
  std::vector<LabelTuple> labels;
  for (int j : {1, 2})
    for (Pol b : {Pol::H, Pol::V}) labels.push_back({ModeLabel{Particle::beta, j, b}});
  return Basis(labels);
}

Basis alpha_out_basis() {
  std::vector<LabelTuple> labels;
  for (Pol a : {Pol::H, Pol::V}) labels.push_back({ModeLabel{Particle::alpha, 1, a}});
  for (Pol a : {Pol::H, Pol::V}) labels.push_back({ModeLabel{Particle::loss, 0, a}});
  return Basis(labels);
}

Basis alpha_source2_basis() {
  std::vector<LabelTuple> labels;
  for (Pol a : {Pol::H, Pol::V}) labels.push_back({ModeLabel{Particle::alpha, 2, a}});
  return Basis(labels);
}

Basis final_state_basis() { return Basis::tensor(alpha_out_basis(), beta_out_basis()); }

Operator single_source_rho(const MixedStateParams& p, int j) {
  p.validate();
  if (j != 1 && j != 2) throw ValidationError("source index must be 1 or 2");
  std::vector<LabelTuple> labels;
  for (Pol a : {Pol::H, Pol::V})
    for (Pol b : {Pol::H, Pol::V})
      labels.push_back({ModeLabel{Particle::alpha, j, a}, ModeLabel{Particle::beta, j, b}});
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  const std::array<Pol, 2> pols{Pol::H, Pol::V};
  for (Pol mu : pols)
    for (Pol nu : pols) {
      const int r = 3 * (mu == Pol::V), c = 3 * (nu == Pol::V);  // |mu mu><nu nu| slots
      m(r, c) = std::sqrt(intensity(p, mu) * intensity(p, nu)) * coh_table(p, mu, nu) *
                std::exp(kI * phase_table(p, mu, nu));
    }
  return Operator(Basis(labels), m);
}

Operator general_two_source_rho(const MixedStateParams& p, const SetupParams& s,
                                const GeneralTwoSourceCoeffs& g) {
  p.validate();
  s.validate();
  g.validate(p);
  const std::complex<double> b[2] = {s.b1, s.b2};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  const std::array<Pol, 2> pols{Pol::H, Pol::V};
  auto diag_ket = [](int j, Pol mu) { return 4 * (j - 1) + 3 * (mu == Pol::V); };
  for (int j : {1, 2})
    for (int k : {1, 2})
      for (Pol mu : pols)
        for (Pol nu : pols) {
          m(diag_ket(j, mu), diag_ket(k, nu)) +=
              b[j - 1] * std::conj(b[k - 1]) *
              std::sqrt(intensity(p, mu) * intensity(p, nu)) * g.p(mu, j, nu, k) *
              std::exp(kI * g.xi(mu, j, nu, k));
        }
  return Operator(two_source_basis(), m);
}

GeneralTwoSourceCoeffs enforce_coherence(const MixedStateParams& p,
                                         const GeneralTwoSourceCoeffs& g, double tol) {
  p.validate();
  g.validate(p, tol);
  for (Pol mu : {Pol::H, Pol::V})
    if (std::abs(g.p(mu, 1, mu, 2) - 1.0) > tol)
      throw ValidationError("enforce_coherence: same-polarization cross-source coherence "
                            "must be 1");
  // Rebuild with every cross magnitude at the admissible value, keeping the
  // phases of g.
  SetupParams s = SetupParams::ideal();
  s.xi_hh = g.xi(Pol::H, 1, Pol::H, 2);
  s.xi_vv = g.xi(Pol::V, 1, Pol::V, 2);
  s.xi_hv = g.xi(Pol::H, 1, Pol::V, 2);
  s.xi_vh = g.xi(Pol::V, 1, Pol::H, 2);
  return GeneralTwoSourceCoeffs::coherent(p, s);
}

CoherenceProbe probe_cross_coherence(double coh, double p_hv, double p_vh, double psd_tol) {
  MixedStateParams p{0.5, coh, 0.0};
  SetupParams s = SetupParams::ideal();  // equal real amplitudes, all phases zero
  auto g = GeneralTwoSourceCoeffs::with_cross(p, s, 1.0, 1.0, p_hv, p_vh);
  auto rho = general_two_source_rho(p, s, g);
  CoherenceProbe probe;
  probe.eigenvalues = opalg::hermitian_eigenvalues(rho);
  probe.min_eigenvalue = probe.eigenvalues.back();
  probe.psd = probe.min_eigenvalue >= -psd_tol;
  // Elementary symmetric functions of the eigenvalues: the quartic
  // coefficients of the characteristic polynomial of the nonzero block.
  const auto& ev = probe.eigenvalues;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
  for (double x : ev) {
    e4 = e4 + x * e3;
    e3 = e3 + x * e2;
    e2 = e2 + x * e1;
    e1 = e1 + x;
  }
  probe.c2 = e2;
  probe.c3 = e3;
  probe.c4 = e4;
  probe.deviation_sq = (p_hv - coh) * (p_hv - coh) + (p_vh - coh) * (p_vh - coh);
  return probe;
}

Operator coherent_two_source_rho(const MixedStateParams& p, const SetupParams& s) {
  return general_two_source_rho(p, s, GeneralTwoSourceCoeffs::coherent(p, s));
}

Ket hwp_loss_ket_transform(const Ket& k, const SetupParams& s) {
  s.validate();
  if (!(k.basis == alpha_source2_basis()))
    throw ValidationError("hwp_loss_ket_transform: ket is not in the source-2 alpha mode family");
  const Eigen::Matrix2d lam = lambda_matrix(s);
  Eigen::Vector4cd out = Eigen::Vector4cd::Zero();
  for (int mu = 0; mu < 2; ++mu) {
    out(0) += lam(mu, 0) * k.amp(mu);
    out(1) += lam(mu, 1) * k.amp(mu);
    out(2 + mu) = (mu == 0 ? s.r_h() : s.r_v()) * k.amp(mu);
  }
  out *= std::exp(-kI * s.phi_alpha);
  return Ket(alpha_out_basis(), out);
}

Operator final_rho(const MixedStateParams& p, const SetupParams& s) {
  auto rho2 = coherent_two_source_rho(p, s);
  // Substitution isometry: source-1 kets embed unchanged, source-2 alpha kets
  // go through the wave-plate/loss map, beta labels keep their source index.
  const Eigen::Matrix2d lam = lambda_matrix(s);
  const std::complex<double> ph = std::exp(-kI * s.phi_alpha);
  Eigen::MatrixXcd sub = Eigen::MatrixXcd::Zero(16, 8);
  auto fidx = [](int a, int b) { return 4 * a + b; };  // alpha-major
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) {
      sub(fidx(mu, nu), 2 * mu + nu) = 1.0;  // j = 1
      const int col = 4 + 2 * mu + nu;       // j = 2
      for (int l = 0; l < 2; ++l) sub(fidx(l, 2 + nu), col) = ph * lam(mu, l);
      sub(fidx(2 + mu, 2 + nu), col) = ph * (mu == 0 ? s.r_h() : s.r_v());
    }
  Operator out(final_state_basis(), sub * rho2.mat * sub.adjoint());
  if (std::abs(opalg::trace(out) - 1.0) > 1e-12)
    throw NumericalError("final_rho: trace not preserved by the substitution");
  return out;
}

Operator reduced_beta_rho(const opalg::Operator& rho_f) {
  if (!(rho_f.basis == final_state_basis()))
    throw ValidationError("reduced_beta_rho: operator is not on the final-state basis");
  return opalg::partial_trace(rho_f, {Particle::beta});
}

}  // namespace entvis::interf
