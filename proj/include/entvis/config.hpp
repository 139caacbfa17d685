#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "entvis/entmeas.hpp"
#include "entvis/interf.hpp"

namespace entvis::cfg {

struct ScanConfig {
  std::size_t n_phases = 256;
  double span = 4.0 * std::numbers::pi;

  void validate() const;
};

struct McConfig {
  double exposure = 1e5;
  std::uint64_t seed = 1;
  int replications = 200;

  void validate() const;
};

enum class OutputFormat { csv, json };

OutputFormat format_from_name(const std::string& name);
std::string format_name(OutputFormat f);

struct OutputConfig {
  OutputFormat format = OutputFormat::csv;
  std::string path;  // empty means: resolve from --out / ENTVIS_OUT_DIR / cwd
};

/// One fully resolved run: state parameters, interferometer settings, scan
/// resolution, optional Monte Carlo block and output routing. Defaults
/// describe the ideal setup (equal real emission amplitudes, unit
/// transmissions, all phases zero).
struct ExperimentConfig {
  entmeas::MixedStateParams state{0.5, 1.0, 0.0};
  interf::SetupParams setup = interf::SetupParams::ideal();
  ScanConfig scan;
  std::optional<McConfig> mc;
  OutputConfig output;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Parses a JSON config; error messages carry 1-based line numbers.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

std::string dump_config(const ExperimentConfig& c);  // pretty, 2-space indent

}  // namespace entvis::cfg
