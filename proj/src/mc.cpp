#include "entvis/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entvis/fit.hpp"

namespace entvis::mc {

using detect::Analyzer;

void CountScan::validate() const {
  if (counts.size() != phases.size())
    throw ValidationError("count scan: phase/count lengths differ");
  if (counts.empty()) throw ValidationError("count scan: empty");
  if (!(exposure > 0.0)) throw ValidationError("count scan: exposure must be positive");
  for (long long c : counts)
    if (c < 0) throw ValidationError("count scan: negative count");
}

double CountSampler::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double CountSampler::normal() {
  const double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

long long CountSampler::poisson_inversion(double mean) {
  const double u = uniform();
  double p = std::exp(-mean), cum = p;
  long long k = 0;
  while (u > cum) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
    if (k > 100000) throw NumericalError("poisson inversion failed to terminate");
  }
  return k;
}

long long CountSampler::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw ValidationError("poisson: mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean > 1000.0) {
    const double draw = mean + std::sqrt(mean) * normal();
    return std::max<long long>(0, std::llround(draw));
  }
  long long total = 0;
  double rem = mean;
  while (rem > 500.0) {  // Poisson(a + b) = Poisson(a) + Poisson(b)
    total += poisson_inversion(500.0);
    rem -= 500.0;
  }
  return total + poisson_inversion(rem);
}

namespace {

CountScan sample_from_rates(const std::vector<double>& phases, const std::vector<double>& rates,
                            Analyzer setting, double exposure, std::uint64_t seed) {
  CountScan cs;
  cs.setting = setting;
  cs.phases = phases;
  cs.exposure = exposure;
  cs.seed = seed;
  cs.counts.resize(phases.size());
  CountSampler sampler(seed);
  for (std::size_t i = 0; i < phases.size(); ++i)
    cs.counts[i] = sampler.poisson(exposure * std::max(rates[i], 0.0));
  return cs;
}

}  // namespace

CountScan sample_counts(const entmeas::MixedStateParams& p, const interf::SetupParams& s,
                        Analyzer setting, const std::vector<double>& phases, double exposure,
                        std::uint64_t seed) {
  if (!(exposure > 0.0)) throw ValidationError("sample_counts: exposure must be positive");
  if (phases.empty()) throw ValidationError("sample_counts: empty phase list");
  auto rho_b = interf::reduced_beta_rho(interf::final_rho(p, s));
  const double ref = detect::phase_reference(s);
  std::vector<double> rates(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i)
    rates[i] = detect::counting_rate(rho_b, setting, phases[i], ref);
  return sample_from_rates(phases, rates, setting, exposure, seed);
}

VisibilityEstimate estimate_visibility(const CountScan& cs) {
  cs.validate();
  long long total = 0;
  for (long long c : cs.counts) total += c;
  if (total == 0) throw ValidationError("estimate_visibility: all counts are zero");
  std::vector<double> y(cs.counts.size()), w(cs.counts.size());
  for (std::size_t i = 0; i < cs.counts.size(); ++i) {
    y[i] = static_cast<double>(cs.counts[i]);
    w[i] = 1.0 / std::max(y[i], 1.0);  // Poisson variance from the observed count
  }
  const auto f = fit::fit_sinusoid_weighted(cs.phases, y, w);
  if (f.offset <= 0.0)
    throw NumericalError("estimate_visibility: nonpositive fitted offset");
  const double amp = f.amplitude;
  const double v = amp / f.offset;
  // Delta method through v = hypot(p, q) / a.
  Eigen::Vector3d g;
  if (amp > 0.0) {
    g << -amp / (f.offset * f.offset), f.coef(1) / (amp * f.offset), f.coef(2) / (amp * f.offset);
  } else {
    g << 0.0, 1.0 / f.offset, 1.0 / f.offset;
  }
  const double var = g.transpose() * f.cov * g;
  return {v, std::sqrt(std::max(var, 0.0))};
}

double ReplicationStudy::coverage_3sigma() const {
  if (rows.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& r : rows)
    if (std::abs(r.v_hat - v_true) <= 3.0 * r.sigma_v) ++hit;
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

double ReplicationStudy::mean_v() const {
  double sum = 0.0;
  for (const auto& r : rows) sum += r.v_hat;
  return rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
}

double ReplicationStudy::median_sigma() const {
  if (rows.empty()) return 0.0;
  std::vector<double> s(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) s[i] = rows[i].sigma_v;
  std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
  return s[s.size() / 2];
}

ReplicationStudy run_replications(const entmeas::MixedStateParams& p,
                                  const interf::SetupParams& s, Analyzer setting,
                                  std::size_t n_phases, double span, double exposure,
                                  std::uint64_t base_seed, int replications, Execution exec) {
  if (replications < 1) throw ValidationError("run_replications: need at least 1 replication");
  if (!(exposure > 0.0)) throw ValidationError("run_replications: exposure must be positive");
  ReplicationStudy study;
  study.v_true = detect::analytic_visibility(p, s, setting);
  study.exposure = exposure;
  study.rows.resize(static_cast<std::size_t>(replications));

  const auto phases = detect::phase_grid(n_phases, span);
  auto rho_b = interf::reduced_beta_rho(interf::final_rho(p, s));
  const double ref = detect::phase_reference(s);
  std::vector<double> rates(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i)
    rates[i] = detect::counting_rate(rho_b, setting, phases[i], ref);

  const auto run_one = [&](std::int64_t r) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
    auto cs = sample_from_rates(phases, rates, setting, exposure, seed);
    auto est = estimate_visibility(cs);
    study.rows[static_cast<std::size_t>(r)] = {seed, est.v_hat, est.sigma_v};
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < replications; ++r) run_one(r);
  } else {
    for (std::int64_t r = 0; r < replications; ++r) run_one(r);
  }
  return study;
}

}  // namespace entvis::mc
