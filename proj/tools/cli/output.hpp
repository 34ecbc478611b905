#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fascopula::cli {

enum class Format { csv, json };

/// Everything needed to reproduce an output file. Parameters keep the order
/// in which they were recorded; values are the resolved flag strings, empty
/// for bare flags.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::uint64_t seed = 0;
  std::string version;
  std::string timestamp;
  /// Facts computed from the parameters (not flags), e.g. whether the
  /// correlation matrix needed repair.
  std::vector<std::pair<std::string, std::string>> derived;

  void add(std::string name, std::string value);
  void note(std::string name, std::string value);
  /// Command line that regenerates the output.
  std::string replay() const;
};

/// Empty cells (nullopt) are written as blank CSV fields and JSON null.
using Cell = std::optional<double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double x);

/// '#'-prefixed manifest lines, as written at the top of CSV output.
std::string manifest_comments(const RunManifest& manifest);
nlohmann::ordered_json manifest_json(const RunManifest& manifest);

std::string render_csv(const RunManifest& manifest, const Table& table);
std::string render_json(const RunManifest& manifest, const Table& table);
std::string render(const RunManifest& manifest, const Table& table, Format format);

}  // namespace fascopula::cli
