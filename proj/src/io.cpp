#include "entvis/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "entvis/errors.hpp"

namespace entvis::io {

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string render(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_g17(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out = "# meta = " + t.meta.dump() + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ",";
    out += t.columns[i];
  }
  out += "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw ValidationError("table row width differs from column count");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += render(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string to_json_text(const Table& t) {
  nlohmann::json j;
  j["meta"] = t.meta;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw ValidationError("table row width differs from column count");
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& c : row) jr.push_back(cell_json(c));
    j["rows"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::random_device rd;
  const auto tmp = path.string() + ".tmp-" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open temporary file " + tmp);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace entvis::io
