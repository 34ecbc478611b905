#include "cli/output.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fascopula::cli {

using Json = nlohmann::ordered_json;

Json manifest_json(const RunManifest& m) {
  Json params = Json::object();
  for (const auto& [name, value] : m.parameters) params[name] = value;
  Json derived = Json::object();
  for (const auto& [name, value] : m.derived) derived[name] = value;
  return Json{{"command", m.command},       {"version", m.version},   {"timestamp", m.timestamp},
              {"seed", m.seed},             {"parameters", params},   {"derived", derived},
              {"replay", m.replay()}};
}

void RunManifest::add(std::string name, std::string value) {
  parameters.emplace_back(std::move(name), std::move(value));
}

void RunManifest::note(std::string name, std::string value) {
  derived.emplace_back(std::move(name), std::move(value));
}

std::string RunManifest::replay() const {
  std::string line = "fascopula " + command;
  for (const auto& [name, value] : parameters) {
    line += " --" + name;
    if (!value.empty()) line += " " + value;
  }
  line += fmt::format(" --seed {}", seed);
  if (timestamp != "unset") line += " --timestamp " + timestamp;
  return line;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

std::string manifest_comments(const RunManifest& m) {
  std::string out;
  out += fmt::format("# command: {}\n", m.command);
  out += fmt::format("# version: {}\n", m.version);
  out += fmt::format("# timestamp: {}\n", m.timestamp);
  out += fmt::format("# seed: {}\n", m.seed);
  for (const auto& [name, value] : m.parameters) {
    out += value.empty() ? fmt::format("# {}\n", name) : fmt::format("# {}: {}\n", name, value);
  }
  for (const auto& [name, value] : m.derived) out += fmt::format("# derived {}: {}\n", name, value);
  out += fmt::format("# replay: {}\n", m.replay());
  return out;
}

std::string render_csv(const RunManifest& m, const Table& table) {
  std::string out = manifest_comments(m);
  out += fmt::format("{}\n", fmt::join(table.columns, ","));
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      if (row[c]) out += format_number(*row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const RunManifest& m, const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    // non-finite values have no JSON literal; they become null like empty cells
    for (const Cell& cell : row) r.push_back(cell && std::isfinite(*cell) ? Json(*cell) : Json());
    rows.push_back(std::move(r));
  }
  Json doc{{"manifest", manifest_json(m)}, {"columns", table.columns}, {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

std::string render(const RunManifest& m, const Table& table, Format format) {
  return format == Format::csv ? render_csv(m, table) : render_json(m, table);
}

}  // namespace fascopula::cli
