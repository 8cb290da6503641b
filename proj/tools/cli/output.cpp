#include "cli/output.hpp"

#include <cmath>

#include <fmt/format.h>

namespace pairemit::cli {
namespace {

nlohmann::ordered_json meta_json(const OutputGrid& grid) {
  nlohmann::ordered_json meta;
  meta["tool"] = "pairemit";
  meta["version"] = grid.record.version;
  meta["command"] = grid.record.command;
  meta["invocation"] = grid.record.invocation();
  meta["units"] = kUnitsNote;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [name, value] : grid.record.parameters) {
    params[name] = value;
  }
  meta["parameters"] = params;
  meta["columns"] = grid.columns;
  return meta;
}

nlohmann::ordered_json cell_json(double value) {
  if (std::isfinite(value)) {
    return value;
  }
  return format_number(value);
}

}  // namespace

std::string RunRecord::invocation() const {
  std::string out = "pairemit " + command;
  for (const auto& [name, value] : parameters) {
    if (value == "true") {
      out += " --" + name;
    } else if (value != "false") {
      out += " --" + name + " " + value;
    }
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  return fmt::format("{:.17g}", value);
}

std::string format_parameter(double value) {
  if (!std::isfinite(value)) {
    return format_number(value);
  }
  return fmt::format("{}", value);
}

void write_csv(std::ostream& out, const OutputGrid& grid) {
  out << "# pairemit " << grid.record.command << '\n';
  out << "# version: " << grid.record.version << '\n';
  out << "# units: " << kUnitsNote << '\n';
  out << "# invocation: " << grid.record.invocation() << '\n';
  for (const auto& [name, value] : grid.record.parameters) {
    out << "# " << name << " = " << value << '\n';
  }
  for (std::size_t i = 0; i < grid.columns.size(); ++i) {
    out << (i ? "," : "") << grid.columns[i];
  }
  out << '\n';
  for (const auto& row : grid.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_number(row[i]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const OutputGrid& grid,
                const nlohmann::ordered_json* summary) {
  nlohmann::ordered_json doc;
  doc["meta"] = meta_json(grid);
  if (summary != nullptr) {
    doc["summary"] = *summary;
  }
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (const auto& row : grid.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const double x : row) {
      r.push_back(cell_json(x));
    }
    data.push_back(std::move(r));
  }
  doc["data"] = std::move(data);
  out << doc.dump(1) << '\n';
}

}  // namespace pairemit::cli
