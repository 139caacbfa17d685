#pragma once

#include <vector>

#include "entvis/opalg.hpp"

namespace entvis::entmeas {

/// Parameters of the two-photon polarization mixed-state family:
/// the H-pair weight i_h (the V-pair weight is 1 - i_h, never stored),
/// the HH<->VV coherence magnitude coh in [0, 1] and its phase phi.
struct MixedStateParams {
  double i_h = 0.5;
  double coh = 1.0;
  double phi = 0.0;

  double i_v() const { return 1.0 - i_h; }
  void validate() const;
};

struct PptResult {
  std::vector<double> eigenvalues;  // descending
  double min_eigenvalue = 0.0;
  bool is_entangled = false;
};

struct EntanglementReport {
  double ppt_min_eigenvalue = 0.0;
  bool is_entangled = false;
  double concurrence_exact = 0.0;
  double concurrence_numeric = 0.0;
  double tol = 1e-10;

  void validate() const;
};

/// Two-qubit basis {HH, HV, VH, VV}, photon alpha first.
opalg::Basis two_qubit_basis();

/// 4x4 density operator of the state family on two_qubit_basis().
opalg::Operator build_rho(const MixedStateParams& p);

/// Eigenvalues of the partial transpose over photon alpha; entangled iff the
/// smallest one is below -tol.
PptResult ppt_criterion(const opalg::Operator& rho, double tol = 1e-10);

/// (sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y).
opalg::Operator spin_flip(const opalg::Operator& rho);

/// Wootters concurrence from the spin-flipped product, max{l1-l2-l3-l4, 0}.
double concurrence_numeric(const opalg::Operator& rho);

/// Closed form for the state family: 2 coh sqrt(i_h (1 - i_h)).
double concurrence_exact(const MixedStateParams& p);

EntanglementReport make_report(const MixedStateParams& p, double tol = 1e-10);

}  // namespace entvis::entmeas
