#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "entvis/entmeas.hpp"
#include "entvis/opalg.hpp"

namespace entvis::interf {

/// Interferometer settings and imperfections: complex emission amplitudes of
/// the two sources (|b1|^2 + |b2|^2 = 1), transmission amplitudes of the
/// detected-photon-free arm per polarization (loss amplitude
/// r_mu = sqrt(1 - t_mu^2) is always derived), half-wave-plate angle theta,
/// the four independent cross-source coherence phases (source-1 -> source-2;
/// the reverse direction is fixed by Hermiticity) and the propagation phases
/// of the two arms.
struct SetupParams {
  std::complex<double> b1{1.0 / std::numbers::sqrt2, 0.0};
  std::complex<double> b2{1.0 / std::numbers::sqrt2, 0.0};
  double t_h = 1.0;
  double t_v = 1.0;
  double theta = 0.0;
  double xi_hh = 0.0;  // H source-1 vs H source-2
  double xi_vv = 0.0;  // V source-1 vs V source-2
  double xi_hv = 0.0;  // H source-1 vs V source-2
  double xi_vh = 0.0;  // V source-1 vs H source-2
  double phi_alpha = 0.0;
  double phi_beta = 0.0;

  double r_h() const { return std::sqrt(1.0 - t_h * t_h); }
  double r_v() const { return std::sqrt(1.0 - t_v * t_v); }
  void validate() const;

  static SetupParams ideal() { return SetupParams{}; }
};

/// Full coefficient maps of the general two-source state: magnitudes
/// p(mu,j,nu,k) in [0, 1] and phases xi(mu,j,nu,k), with the symmetry
/// p(mu,j,nu,k) = p(nu,k,mu,j), antisymmetric phases, and within-source
/// values pinned to the single-source state.
class GeneralTwoSourceCoeffs {
 public:
  /// Cross-source magnitudes equal to the single-source coherence table
  /// (the fully coherent case).
  static GeneralTwoSourceCoeffs coherent(const entmeas::MixedStateParams& p,
                                         const SetupParams& s);

  /// Candidate cross-source magnitudes, for probing which are admissible.
  static GeneralTwoSourceCoeffs with_cross(const entmeas::MixedStateParams& p,
                                           const SetupParams& s, double p_hh, double p_vv,
                                           double p_hv, double p_vh);

  double p(opalg::Pol mu, int j, opalg::Pol nu, int k) const;
  double xi(opalg::Pol mu, int j, opalg::Pol nu, int k) const;

  void validate(const entmeas::MixedStateParams& p, double tol = 1e-10) const;

 private:
  GeneralTwoSourceCoeffs() = default;
  static int idx(opalg::Pol mu, int j);
  std::array<std::array<double, 4>, 4> p_{};
  std::array<std::array<double, 4>, 4> xi_{};
};

/// Eigenstructure of the canonical two-source operator built with candidate
/// cross-polarization coherences, plus the quartic characteristic-polynomial
/// coefficients of its nonzero block and the squared deviation of the
/// candidates from the admissible value.
struct CoherenceProbe {
  std::vector<double> eigenvalues;  // descending
  double min_eigenvalue = 0.0;
  bool psd = false;
  double c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double deviation_sq = 0.0;
};

/// Biphoton basis of the two-source arrangement: both photons carry the index
/// of the emitting source, so the 8 tuples are (mu_alpha^j, nu_beta^j) in
/// source-major order. Deliberately not a tensor product of one-photon bases.
opalg::Basis two_source_basis();

/// Detected-photon basis {H_beta^1, V_beta^1, H_beta^2, V_beta^2}.
opalg::Basis beta_out_basis();

/// Undetected-arm basis after the wave-plate/loss map:
/// {H_alpha^1, V_alpha^1, H_loss, V_loss}.
opalg::Basis alpha_out_basis();

/// Source-2 alpha modes {H_alpha^2, V_alpha^2} (input family of the map).
opalg::Basis alpha_source2_basis();

/// alpha_out (x) beta_out, 16-dimensional.
opalg::Basis final_state_basis();

/// Single-source biphoton state on (mu_alpha^j, nu_beta^j); entrywise equal
/// to entmeas::build_rho.
opalg::Operator single_source_rho(const entmeas::MixedStateParams& p, int j);

/// The general two-source state with explicit coefficient maps.
opalg::Operator general_two_source_rho(const entmeas::MixedStateParams& p, const SetupParams& s,
                                       const GeneralTwoSourceCoeffs& g);

/// Checks the same-polarization full-coherence condition on g and returns
/// coefficients with every cross-source magnitude replaced by the admissible
/// value.
GeneralTwoSourceCoeffs enforce_coherence(const entmeas::MixedStateParams& p,
                                         const GeneralTwoSourceCoeffs& g, double tol = 1e-10);

/// Builds the canonical symmetric two-source operator with candidate
/// cross-polarization magnitudes and reports whether it stays positive
/// semi-definite. Positivity fails whenever a candidate deviates from the
/// coherence magnitude of the state, which is what forces the admissible
/// value.
CoherenceProbe probe_cross_coherence(double coh, double p_hv, double p_vh, double psd_tol = 1e-10);

/// Two-source state of the coherently pumped arrangement.
opalg::Operator coherent_two_source_rho(const entmeas::MixedStateParams& p, const SetupParams& s);

/// Wave-plate + loss map on a source-2 alpha ket:
/// |mu_alpha^2>  ->  e^{-i phi_alpha} [ sum_l Lambda_{mu l}(theta) |l_alpha^1> + r_mu |mu_loss> ]
/// with Lambda_HH = t_h cos 2theta, Lambda_HV = t_h sin 2theta,
/// Lambda_VH = t_v sin 2theta, Lambda_VV = -t_v cos 2theta. Norm-preserving.
opalg::Ket hwp_loss_ket_transform(const opalg::Ket& k, const SetupParams& s);

/// Final biphoton state on final_state_basis(): the two-source state with the
/// wave-plate/loss substitution applied to every source-2 alpha ket.
opalg::Operator final_rho(const entmeas::MixedStateParams& p, const SetupParams& s);

/// State of the detected photon: partial trace of the final state over the
/// undetected photon and the loss modes.
opalg::Operator reduced_beta_rho(const opalg::Operator& rho_f);

}  // namespace entvis::interf
