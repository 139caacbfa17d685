#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "entvis/detect.hpp"
#include "entvis/exec.hpp"

namespace entvis::mc {

/// Poisson-sampled photon counts across a phase scan. `exposure` converts a
/// dimensionless rate into an expected count per bin.
struct CountScan {
  detect::Analyzer setting = detect::Analyzer::D;
  std::vector<double> phases;
  std::vector<long long> counts;
  double exposure = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministic count source, reproducible bit-for-bit from the seed.
/// Engine: std::mt19937_64; uniforms take the top 53 bits; normals via
/// Box-Muller; Poisson draws by inversion for means up to 1000 (split into
/// chunks of at most 500 so e^{-mean} stays representable) and by a rounded
/// normal approximation above.
class CountSampler {
 public:
  explicit CountSampler(std::uint64_t seed) : eng_(seed) {}

  double uniform();  // [0, 1)
  double normal();   // standard normal
  long long poisson(double mean);

 private:
  long long poisson_inversion(double mean);
  std::mt19937_64 eng_;
};

CountScan sample_counts(const entmeas::MixedStateParams& p, const interf::SetupParams& s,
                        detect::Analyzer setting, const std::vector<double>& phases,
                        double exposure, std::uint64_t seed);

struct VisibilityEstimate {
  double v_hat = 0.0;
  double sigma_v = 0.0;
};

/// Poisson-weighted sinusoid fit of the counts; the uncertainty comes from
/// the fit covariance through the visibility gradient.
VisibilityEstimate estimate_visibility(const CountScan& cs);

struct ReplicationRow {
  std::uint64_t seed = 0;
  double v_hat = 0.0;
  double sigma_v = 0.0;
};

struct ReplicationStudy {
  double v_true = 0.0;
  double exposure = 0.0;
  std::vector<ReplicationRow> rows;

  double coverage_3sigma() const;
  double mean_v() const;
  double median_sigma() const;
};

/// Runs independent seeded replications (seed = base_seed + index, each with
/// its own generator). The parallel path partitions over replications and is
/// bit-identical to the serial one.
ReplicationStudy run_replications(const entmeas::MixedStateParams& p,
                                  const interf::SetupParams& s, detect::Analyzer setting,
                                  std::size_t n_phases, double span, double exposure,
                                  std::uint64_t base_seed, int replications,
                                  Execution exec = Execution::serial);

}  // namespace entvis::mc
