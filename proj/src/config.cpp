#include "entvis/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace entvis::cfg {

using nlohmann::json;

void ScanConfig::validate() const {
  if (n_phases < 64) throw ValidationError("scan.n_phases must be at least 64");
  if (!(span >= 2.0 * std::numbers::pi))
    throw ValidationError("scan.span must cover at least one full period (2 pi)");
}

void McConfig::validate() const {
  if (!(exposure > 0.0)) throw ValidationError("mc.exposure must be positive");
  if (replications < 1) throw ValidationError("mc.replications must be at least 1");
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ValidationError("output.format must be 'csv' or 'json', got '" + name + "'");
}

std::string format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

void ExperimentConfig::validate() const {
  state.validate();
  setup.validate();
  scan.validate();
  if (mc) mc->validate();
}

namespace {

json complex_to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError(where + ": expected a number or an [re, im] pair");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& section) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw ValidationError("unknown key '" + key + "' in section '" + section + "'");
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json j;
  j["state"] = {{"i_h", c.state.i_h}, {"coh", c.state.coh}, {"phi", c.state.phi}};
  j["setup"] = {{"b1", complex_to_json(c.setup.b1)},
                {"b2", complex_to_json(c.setup.b2)},
                {"t_h", c.setup.t_h},
                {"t_v", c.setup.t_v},
                {"theta", c.setup.theta},
                {"xi_hh", c.setup.xi_hh},
                {"xi_vv", c.setup.xi_vv},
                {"xi_hv", c.setup.xi_hv},
                {"xi_vh", c.setup.xi_vh},
                {"phi_alpha", c.setup.phi_alpha},
                {"phi_beta", c.setup.phi_beta}};
  j["scan"] = {{"n_phases", c.scan.n_phases}, {"span", c.scan.span}};
  if (c.mc)
    j["mc"] = {{"exposure", c.mc->exposure},
               {"seed", c.mc->seed},
               {"replications", c.mc->replications}};
  j["output"] = {{"format", format_name(c.output.format)}, {"path", c.output.path}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config root must be a JSON object");
  reject_unknown_keys(j, {"state", "setup", "scan", "mc", "output"}, "config");
  ExperimentConfig c;
  if (j.contains("state")) {
    const auto& js = j.at("state");
    reject_unknown_keys(js, {"i_h", "coh", "phi"}, "state");
    read_into(js, "i_h", c.state.i_h);
    read_into(js, "coh", c.state.coh);
    read_into(js, "phi", c.state.phi);
  }
  if (j.contains("setup")) {
    const auto& js = j.at("setup");
    reject_unknown_keys(js,
                        {"b1", "b2", "t_h", "t_v", "theta", "xi_hh", "xi_vv", "xi_hv", "xi_vh",
                         "phi_alpha", "phi_beta"},
                        "setup");
    if (js.contains("b1")) c.setup.b1 = complex_from_json(js.at("b1"), "setup.b1");
    if (js.contains("b2")) c.setup.b2 = complex_from_json(js.at("b2"), "setup.b2");
    read_into(js, "t_h", c.setup.t_h);
    read_into(js, "t_v", c.setup.t_v);
    read_into(js, "theta", c.setup.theta);
    read_into(js, "xi_hh", c.setup.xi_hh);
    read_into(js, "xi_vv", c.setup.xi_vv);
    read_into(js, "xi_hv", c.setup.xi_hv);
    read_into(js, "xi_vh", c.setup.xi_vh);
    read_into(js, "phi_alpha", c.setup.phi_alpha);
    read_into(js, "phi_beta", c.setup.phi_beta);
  }
  if (j.contains("scan")) {
    const auto& js = j.at("scan");
    reject_unknown_keys(js, {"n_phases", "span"}, "scan");
    read_into(js, "n_phases", c.scan.n_phases);
    read_into(js, "span", c.scan.span);
  }
  if (j.contains("mc")) {
    const auto& js = j.at("mc");
    reject_unknown_keys(js, {"exposure", "seed", "replications"}, "mc");
    McConfig m;
    read_into(js, "exposure", m.exposure);
    read_into(js, "seed", m.seed);
    read_into(js, "replications", m.replications);
    c.mc = m;
  }
  if (j.contains("output")) {
    const auto& js = j.at("output");
    reject_unknown_keys(js, {"format", "path"}, "output");
    if (js.contains("format")) c.output.format = format_from_name(js.at("format").get<std::string>());
    read_into(js, "path", c.output.path);
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ":" + std::to_string(line_of_offset(text, e.byte)) +
                          ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string dump_config(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace entvis::cfg
