#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace entvis::io {

/// Round-trip-safe decimal rendering (17 significant digits).
std::string format_g17(double x);

using Cell = std::variant<double, long long, std::string>;

/// Tabular result with column names and a metadata object (the resolved
/// config) carried into every output file.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json meta;
};

/// CSV rendering: '# meta = {...}' comment line, header row, then data rows.
std::string to_csv(const Table& t);

/// JSON rendering: {"meta": ..., "columns": [...], "rows": [[...], ...]}.
std::string to_json_text(const Table& t);

/// Writes via a temporary file in the same directory plus an atomic rename,
/// so partial runs never leave a truncated artifact behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace entvis::io
