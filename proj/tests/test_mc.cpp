#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entvis/mc.hpp"

using namespace entvis;
using detect::Analyzer;
using entmeas::MixedStateParams;
using interf::SetupParams;

namespace {

constexpr double kQuarter = std::numbers::pi / 4.0;
constexpr double kPhi8 = std::numbers::pi / 8.0;

SetupParams imperfect_setup(double theta) {
  SetupParams s;
  s.b1 = std::sqrt(0.55);
  s.b2 = std::sqrt(0.45);
  s.t_h = 0.9;
  s.t_v = 0.85;
  s.xi_hv = -kPhi8;
  s.xi_vh = kPhi8;
  s.theta = theta;
  return s;
}

}  // namespace

TEST_CASE("poisson sampler moments and edge cases") {
  mc::CountSampler sampler(99);
  CHECK(sampler.poisson(0.0) == 0);
  CHECK_THROWS_AS(sampler.poisson(-1.0), ValidationError);

  // sample means track the expectation in all three regimes of the sampler
  for (double mean : {3.0, 120.0, 800.0, 50000.0}) {
    const int n = 4000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(sampler.poisson(mean));
    const double avg = sum / n;
    CHECK(std::abs(avg - mean) < 6.0 * std::sqrt(mean / n));
  }
}

TEST_CASE("sampling is reproducible per seed") {
  const auto phases = detect::phase_grid(128, 4.0 * std::numbers::pi);
  MixedStateParams p{0.5, 0.5, kPhi8};
  const auto s = imperfect_setup(kQuarter);
  auto a = mc::sample_counts(p, s, Analyzer::D, phases, 1e4, 7);
  auto b = mc::sample_counts(p, s, Analyzer::D, phases, 1e4, 7);
  auto c = mc::sample_counts(p, s, Analyzer::D, phases, 1e4, 8);
  CHECK(a.counts == b.counts);
  CHECK(a.counts != c.counts);
}

TEST_CASE("vanishing exposure limit produces only zeros") {
  const auto phases = detect::phase_grid(128, 4.0 * std::numbers::pi);
  auto cs = mc::sample_counts({0.5, 1.0, 0.0}, imperfect_setup(kQuarter), Analyzer::D, phases,
                              1e-300, 12345);
  for (long long cnt : cs.counts) CHECK(cnt == 0);
  CHECK_THROWS_AS(mc::sample_counts({0.5, 1.0, 0.0}, imperfect_setup(kQuarter), Analyzer::D,
                                    phases, 0.0, 1),
                  ValidationError);
}

TEST_CASE("counts stay within the statistical envelope") {
  const auto phases = detect::phase_grid(256, 4.0 * std::numbers::pi);
  MixedStateParams p{0.5, 1.0, kPhi8};
  const auto s = imperfect_setup(kQuarter);
  const double exposure = 1e6;
  auto cs = mc::sample_counts(p, s, Analyzer::D, phases, exposure, 31);
  auto rho = interf::reduced_beta_rho(interf::final_rho(p, s));
  const double ref = detect::phase_reference(s);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double mean = exposure * detect::counting_rate(rho, Analyzer::D, phases[i], ref);
    CHECK(std::abs(static_cast<double>(cs.counts[i]) - mean) <
          5.0 * std::sqrt(std::max(mean, 1.0)));
  }
}

TEST_CASE("estimator recovers the visibility from noiseless counts") {
  const auto phases = detect::phase_grid(256, 4.0 * std::numbers::pi);
  MixedStateParams p{0.5, 0.5, kPhi8};
  const auto s = imperfect_setup(kQuarter);
  auto rho = interf::reduced_beta_rho(interf::final_rho(p, s));
  const double ref = detect::phase_reference(s);
  const double exposure = 1e9;
  mc::CountScan cs;
  cs.setting = Analyzer::D;
  cs.phases = phases;
  cs.exposure = exposure;
  cs.seed = 0;
  for (double phi : phases)
    cs.counts.push_back(
        std::llround(exposure * detect::counting_rate(rho, Analyzer::D, phi, ref)));
  auto est = mc::estimate_visibility(cs);
  const double v_true = detect::analytic_visibility(p, s, Analyzer::D);
  CHECK(std::abs(est.v_hat - v_true) < 1e-3);
  CHECK(std::abs(est.v_hat - v_true) < 1e-6);  // rounding noise only
}

TEST_CASE("flat scans give estimates consistent with zero") {
  const auto phases = detect::phase_grid(256, 4.0 * std::numbers::pi);
  auto cs = mc::sample_counts({0.5, 0.0, 0.0}, imperfect_setup(kQuarter), Analyzer::D, phases,
                              1e5, 17);
  auto est = mc::estimate_visibility(cs);
  CHECK(est.v_hat < 3.0 * est.sigma_v + 1e-12);
}

TEST_CASE("estimate hits the reference value within three sigma") {
  const auto phases = detect::phase_grid(256, 4.0 * std::numbers::pi);
  MixedStateParams p{0.5, 0.5, kPhi8};
  const auto s = imperfect_setup(kQuarter);
  auto cs = mc::sample_counts(p, s, Analyzer::D, phases, 1e5, 4242);
  auto est = mc::estimate_visibility(cs);
  CHECK(std::abs(est.v_hat - 0.402199394071465) <= 3.0 * est.sigma_v);
  CHECK(est.sigma_v < 0.01);
}

TEST_CASE("all-zero scans are rejected") {
  mc::CountScan cs;
  cs.phases = detect::phase_grid(128, 4.0 * std::numbers::pi);
  cs.counts.assign(cs.phases.size(), 0);
  cs.exposure = 1.0;
  CHECK_THROWS_AS(mc::estimate_visibility(cs), ValidationError);
}

TEST_CASE("replication batches: serial equals parallel bit for bit") {
  MixedStateParams p{0.5, 0.5, kPhi8};
  const auto s = imperfect_setup(kQuarter);
  auto a = mc::run_replications(p, s, Analyzer::D, 128, 4.0 * std::numbers::pi, 1e4, 1000, 16,
                                Execution::serial);
  auto b = mc::run_replications(p, s, Analyzer::D, 128, 4.0 * std::numbers::pi, 1e4, 1000, 16,
                                Execution::parallel);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].v_hat == b.rows[i].v_hat);
    CHECK(a.rows[i].sigma_v == b.rows[i].sigma_v);
    CHECK(a.rows[i].seed == b.rows[i].seed);
  }
}

TEST_CASE("coverage and error scale sensibly with exposure") {
  MixedStateParams p{0.5, 0.5, kPhi8};
  const auto s = imperfect_setup(kQuarter);
  auto quick = mc::run_replications(p, s, Analyzer::D, 128, 4.0 * std::numbers::pi, 1e5, 500, 40,
                                    Execution::parallel);
  CHECK(quick.coverage_3sigma() >= 0.95);
  CHECK(std::abs(quick.mean_v() - quick.v_true) < quick.median_sigma());

  auto low = mc::run_replications(p, s, Analyzer::D, 128, 4.0 * std::numbers::pi, 1e4, 900, 24,
                                  Execution::parallel);
  auto high = mc::run_replications(p, s, Analyzer::D, 128, 4.0 * std::numbers::pi, 1e6, 900, 24,
                                   Execution::parallel);
  const double ratio = low.median_sigma() / high.median_sigma();
  CHECK(ratio > 10.0 / 1.5);
  CHECK(ratio < 10.0 * 1.5);
  // estimator bias stays below one sigma down to the smallest exposure
  CHECK(std::abs(low.mean_v() - low.v_true) < low.median_sigma());
}
