#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "entvis/exec.hpp"
#include "entvis/interf.hpp"

namespace entvis::detect {

/// Polarization projection applied to the detected photon. Diagonal and
/// anti-diagonal are (|H> + |V>)/sqrt2 and (|V> - |H>)/sqrt2; right- and
/// left-circular are (|H> - i|V>)/sqrt2 and (|H> + i|V>)/sqrt2.
enum class Analyzer { H, V, D, A, R, L };

inline constexpr std::array<Analyzer, 6> kAnalyzers{Analyzer::H, Analyzer::V, Analyzer::D,
                                                    Analyzer::A, Analyzer::R, Analyzer::L};

std::array<std::complex<double>, 2> analyzer_ket(Analyzer a);
std::string analyzer_name(Analyzer a);
Analyzer analyzer_from_name(const std::string& name);

/// Counting rate versus interferometric phase for one analyzer setting.
struct PhaseScan {
  Analyzer setting = Analyzer::H;
  double theta = 0.0;
  std::vector<double> phases;
  std::vector<double> rates;

  void validate() const;  // increasing phases spanning a full period, rates >= 0
};

/// The six visibilities feeding the entanglement tests: H/V measured with the
/// wave plate at 0, D/A/R/L with the wave plate at pi/4.
struct VisibilitySet {
  double v_h = 0.0;
  double v_v = 0.0;
  double v_d = 0.0;
  double v_a = 0.0;
  double v_r = 0.0;
  double v_l = 0.0;

  void validate(double tol = 1e-10) const;  // ranges plus the D=A and R=L equalities
};

/// Detector-phase bookkeeping: the interferometric phase is
/// phi_alpha - phi_beta + arg b1 - arg b2, so a scan at requested phase
/// phi_in sets the beam-splitter phase to phase_reference(s) - phi_in.
double phase_reference(const interf::SetupParams& s);

/// Single-photon counting rate from the reduced detected-photon state: the
/// detector field superposes the two beta beams with a relative i e^{i
/// phi_beta} factor and projects on the analyzer polarization.
double counting_rate(const opalg::Operator& rho_beta, Analyzer setting, double phi_in,
                     double phase_ref = 0.0);

/// Closed-form counting rates. H, V and D accept any wave-plate angle; A, R
/// and L exist only at theta = pi/4 and reject other angles.
double analytic_rate(const entmeas::MixedStateParams& p, const interf::SetupParams& s,
                     Analyzer setting, double phi_in);

/// Closed-form visibility at the setup's wave-plate angle (same angle domain
/// rules as analytic_rate).
double analytic_visibility(const entmeas::MixedStateParams& p, const interf::SetupParams& s,
                           Analyzer setting);

/// Closed, evenly spaced grid [0, span].
std::vector<double> phase_grid(std::size_t n, double span);

PhaseScan scan_rates(const entmeas::MixedStateParams& p, const interf::SetupParams& s,
                     Analyzer setting, std::size_t n_phases = 256,
                     double span = 4.0 * std::numbers::pi, Execution exec = Execution::serial);

/// Fringe contrast (max - min)/(max + min), estimated from the grid and
/// refined by a sinusoid fit; the two must agree to within the grid
/// resolution, and the fit residual must be at roundoff level.
double visibility(const PhaseScan& scan);

/// All six visibilities from phase scans of the numeric pipeline, with the
/// wave plate at 0 for H/V and at pi/4 for D/A/R/L.
VisibilitySet visibility_set(const entmeas::MixedStateParams& p, const interf::SetupParams& s,
                             std::size_t n_phases = 256, double span = 4.0 * std::numbers::pi,
                             Execution exec = Execution::serial);

/// Closed-form counterpart of visibility_set.
VisibilitySet analytic_visibility_set(const entmeas::MixedStateParams& p,
                                      const interf::SetupParams& s);

/// Entangled iff sqrt(v_d^2 + v_r^2) > tol; the combination vanishes exactly
/// when the state is separable, whatever the imperfections.
bool ppt_from_visibility(const VisibilitySet& vs, double tol = 1e-10);

/// Concurrence estimate sqrt(2 (v_d^2 + v_r^2) / (v_h^2 + v_v^2)); equals the
/// exact concurrence in spite of losses and source imbalance.
double concurrence_from_visibility(const VisibilitySet& vs);

}  // namespace entvis::detect
