#include "entvis/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "entvis/fit.hpp"

namespace entvis::detect {

using entmeas::MixedStateParams;
using interf::SetupParams;
using opalg::Operator;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kQuarter = std::numbers::pi / 4.0;

struct RateTerms {
  double ab;   // |b1||b2|
  double isq;  // coh sqrt(i_h i_v)
  double c2;   // cos 2theta
  double s2;   // sin 2theta
};

RateTerms rate_terms(const MixedStateParams& p, const SetupParams& s) {
  return {std::abs(s.b1) * std::abs(s.b2), p.coh * std::sqrt(p.i_h * p.i_v()),
          std::cos(2.0 * s.theta), std::sin(2.0 * s.theta)};
}

void require_quarter(const SetupParams& s, Analyzer a) {
  if (std::abs(s.theta - kQuarter) > 1e-12)
    throw ValidationError("analytic form for analyzer " + analyzer_name(a) +
                          " exists only at theta = pi/4");
}

}  // namespace

std::array<std::complex<double>, 2> analyzer_ket(Analyzer a) {
  const double rs = 1.0 / std::numbers::sqrt2;
  switch (a) {
    case Analyzer::H: return {1.0, 0.0};
    case Analyzer::V: return {0.0, 1.0};
    case Analyzer::D: return {rs, rs};
    case Analyzer::A: return {-rs, rs};
    case Analyzer::R: return {rs, -kI * rs};
    case Analyzer::L: return {rs, kI * rs};
  }
  throw ValidationError("unknown analyzer setting");
}

std::string analyzer_name(Analyzer a) {
  switch (a) {
    case Analyzer::H: return "H";
    case Analyzer::V: return "V";
    case Analyzer::D: return "D";
    case Analyzer::A: return "A";
    case Analyzer::R: return "R";
    case Analyzer::L: return "L";
  }
  throw ValidationError("unknown analyzer setting");
}

Analyzer analyzer_from_name(const std::string& name) {
  for (Analyzer a : kAnalyzers)
    if (analyzer_name(a) == name) return a;
  throw ValidationError("unknown analyzer setting '" + name + "'");
}

void PhaseScan::validate() const {
  if (phases.size() != rates.size()) throw ValidationError("scan: phase/rate lengths differ");
  if (phases.size() < 2) throw ValidationError("scan: too few samples");
  for (std::size_t i = 1; i < phases.size(); ++i)
    if (!(phases[i] > phases[i - 1]))
      throw ValidationError("scan: phases must be strictly increasing");
  if (phases.back() - phases.front() < 2.0 * std::numbers::pi - 1e-12)
    throw ValidationError("scan: phases must span at least one full period");
  for (double r : rates)
    if (!(r >= -1e-9) || !std::isfinite(r))
      throw ValidationError("scan: rates must be nonnegative");
}

void VisibilitySet::validate(double tol) const {
  for (double v : {v_h, v_v, v_d, v_a, v_r, v_l})
    if (!(v >= -tol && v <= 1.0 + 1e-9))
      throw ValidationError("visibility outside [0, 1]");
  if (std::abs(v_d - v_a) > tol || std::abs(v_r - v_l) > tol)
    throw ValidationError("visibility set: D/A or R/L pair mismatch");
}

double phase_reference(const SetupParams& s) {
  return s.phi_alpha + std::arg(s.b1) - std::arg(s.b2);
}

double counting_rate(const Operator& rho_beta, Analyzer setting, double phi_in,
                     double phase_ref) {
  if (!(rho_beta.basis == interf::beta_out_basis()))
    throw ValidationError("counting_rate: operator is not on the detected-photon basis");
  const auto c = analyzer_ket(setting);
  const double phi_b = phase_ref - phi_in;
  Eigen::Vector4cd e;
  e << c[0], c[1], -kI * std::exp(-kI * phi_b) * c[0], -kI * std::exp(-kI * phi_b) * c[1];
  return (e.adjoint() * rho_beta.mat * e).value().real();
}

double analytic_rate(const MixedStateParams& p, const SetupParams& s, Analyzer setting,
                     double phi_in) {
  p.validate();
  s.validate();
  const auto [ab, isq, c2, s2] = rate_terms(p, s);
  switch (setting) {
    case Analyzer::H:
      return p.i_h * (1.0 + 2.0 * ab * s.t_h * c2 * std::sin(phi_in + s.xi_hh));
    case Analyzer::V:
      return p.i_v() * (1.0 - 2.0 * ab * s.t_v * c2 * std::sin(phi_in + s.xi_vv));
    case Analyzer::D:
      return 0.5 * (1.0 +
                    2.0 * ab *
                        (c2 * (p.i_h * s.t_h * std::sin(phi_in + s.xi_hh) -
                               p.i_v() * s.t_v * std::sin(phi_in + s.xi_vv)) +
                         isq * s2 *
                             (s.t_v * std::sin(phi_in + s.xi_hv) +
                              s.t_h * std::sin(phi_in + s.xi_vh))));
    case Analyzer::A:
      require_quarter(s, setting);
      return 0.5 * (1.0 - 2.0 * ab * isq *
                              (s.t_v * std::sin(phi_in + s.xi_hv) +
                               s.t_h * std::sin(phi_in + s.xi_vh)));
    case Analyzer::R:
      require_quarter(s, setting);
      return 0.5 * (1.0 + 2.0 * ab * isq *
                              (s.t_h * std::cos(phi_in + s.xi_vh) -
                               s.t_v * std::cos(phi_in + s.xi_hv)));
    case Analyzer::L:
      require_quarter(s, setting);
      return 0.5 * (1.0 - 2.0 * ab * isq *
                              (s.t_h * std::cos(phi_in + s.xi_vh) -
                               s.t_v * std::cos(phi_in + s.xi_hv)));
  }
  throw ValidationError("unknown analyzer setting");
}

double analytic_visibility(const MixedStateParams& p, const SetupParams& s, Analyzer setting) {
  p.validate();
  s.validate();
  const auto [ab, isq, c2, s2] = rate_terms(p, s);
  switch (setting) {
    case Analyzer::H: return 2.0 * ab * s.t_h * std::abs(c2);
    case Analyzer::V: return 2.0 * ab * s.t_v * std::abs(c2);
    case Analyzer::D: {
      // Modulus of the combined single-frequency modulation of the D rate.
      const std::complex<double> z =
          c2 * (p.i_h * s.t_h * std::exp(kI * s.xi_hh) -
                p.i_v() * s.t_v * std::exp(kI * s.xi_vv)) +
          isq * s2 * (s.t_v * std::exp(kI * s.xi_hv) + s.t_h * std::exp(kI * s.xi_vh));
      return 2.0 * ab * std::abs(z);
    }
    case Analyzer::A:
      require_quarter(s, setting);
      return 2.0 * isq * ab *
             std::abs(s.t_v * std::exp(kI * s.xi_hv) + s.t_h * std::exp(kI * s.xi_vh));
    case Analyzer::R:
    case Analyzer::L:
      require_quarter(s, setting);
      return 2.0 * isq * ab *
             std::abs(s.t_h * std::exp(kI * s.xi_vh) - s.t_v * std::exp(kI * s.xi_hv));
  }
  throw ValidationError("unknown analyzer setting");
}

std::vector<double> phase_grid(std::size_t n, double span) {
  if (n < 2 || !(span > 0.0)) throw ValidationError("phase grid: need n >= 2 and span > 0");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = span * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

PhaseScan scan_rates(const MixedStateParams& p, const SetupParams& s, Analyzer setting,
                     std::size_t n_phases, double span, Execution exec) {
  auto rho_b = interf::reduced_beta_rho(interf::final_rho(p, s));
  const double ref = phase_reference(s);
  PhaseScan scan;
  scan.setting = setting;
  scan.theta = s.theta;
  scan.phases = phase_grid(n_phases, span);
  scan.rates.resize(n_phases);
  const auto n = static_cast<std::int64_t>(n_phases);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      scan.rates[static_cast<std::size_t>(i)] =
          counting_rate(rho_b, setting, scan.phases[static_cast<std::size_t>(i)], ref);
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      scan.rates[static_cast<std::size_t>(i)] =
          counting_rate(rho_b, setting, scan.phases[static_cast<std::size_t>(i)], ref);
  }
  return scan;
}

double visibility(const PhaseScan& scan) {
  scan.validate();
  if (scan.phases.size() < 64)
    throw ValidationError("visibility: need at least 64 samples over a full period");
  const double rmax = *std::max_element(scan.rates.begin(), scan.rates.end());
  const double rmin = *std::min_element(scan.rates.begin(), scan.rates.end());
  if (rmax + rmin < 1e-300) return 0.0;  // identically dark scan
  const double v_grid = (rmax - rmin) / (rmax + rmin);
  const auto f = fit::fit_sinusoid(scan.phases, scan.rates);
  if (f.residual_rms > 1e-8 * (std::abs(f.offset) + f.amplitude) + 1e-300)
    throw NumericalError("visibility: non-sinusoidal scan (fit residual above threshold)");
  if (f.offset < 1e-300) return 0.0;
  const double v_fit = f.amplitude / f.offset;
  double step = 0.0;
  for (std::size_t i = 1; i < scan.phases.size(); ++i)
    step = std::max(step, scan.phases[i] - scan.phases[i - 1]);
  if (std::abs(v_grid - v_fit) > 2.0 * step * step * std::max(v_fit, 1e-3) + 1e-12)
    throw NumericalError("visibility: grid and fit estimates disagree beyond grid resolution");
  return v_fit;
}

VisibilitySet visibility_set(const MixedStateParams& p, const SetupParams& s,
                             std::size_t n_phases, double span, Execution exec) {
  SetupParams s0 = s;
  s0.theta = 0.0;
  SetupParams s45 = s;
  s45.theta = kQuarter;
  VisibilitySet vs;
  vs.v_h = visibility(scan_rates(p, s0, Analyzer::H, n_phases, span, exec));
  vs.v_v = visibility(scan_rates(p, s0, Analyzer::V, n_phases, span, exec));
  vs.v_d = visibility(scan_rates(p, s45, Analyzer::D, n_phases, span, exec));
  vs.v_a = visibility(scan_rates(p, s45, Analyzer::A, n_phases, span, exec));
  vs.v_r = visibility(scan_rates(p, s45, Analyzer::R, n_phases, span, exec));
  vs.v_l = visibility(scan_rates(p, s45, Analyzer::L, n_phases, span, exec));
  return vs;
}

VisibilitySet analytic_visibility_set(const MixedStateParams& p, const SetupParams& s) {
  SetupParams s0 = s;
  s0.theta = 0.0;
  SetupParams s45 = s;
  s45.theta = kQuarter;
  VisibilitySet vs;
  vs.v_h = analytic_visibility(p, s0, Analyzer::H);
  vs.v_v = analytic_visibility(p, s0, Analyzer::V);
  vs.v_d = analytic_visibility(p, s45, Analyzer::D);
  vs.v_a = analytic_visibility(p, s45, Analyzer::A);
  vs.v_r = analytic_visibility(p, s45, Analyzer::R);
  vs.v_l = analytic_visibility(p, s45, Analyzer::L);
  return vs;
}

bool ppt_from_visibility(const VisibilitySet& vs, double tol) {
  vs.validate(std::max(tol, 1e-10));
  return std::hypot(vs.v_d, vs.v_r) > tol;
}

double concurrence_from_visibility(const VisibilitySet& vs) {
  if (vs.v_h < 1e-9 && vs.v_v < 1e-9)
    throw NumericalError("concurrence_from_visibility: no reference fringe (both H and V "
                         "visibilities vanish)");
  return std::sqrt(2.0 * (vs.v_d * vs.v_d + vs.v_r * vs.v_r) /
                   (vs.v_h * vs.v_h + vs.v_v * vs.v_v));
}

}  // namespace entvis::detect
