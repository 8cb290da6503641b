#pragma once

// Plot-ready data grids: CSV with '#' metadata lines, or JSON with "meta" and
// "data" keys. Floats carry 17 significant digits; non-finite cells become the
// tokens "inf", "-inf" and "nan".

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pairemit::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kUnitsNote = "omega0 = 1, c = 1, hbar = 1";

/// Everything needed to reproduce an output file. `wall_seconds` is reported
/// on stderr only, so files stay byte-identical across runs.
struct RunRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;  // in flag order
  std::string version = kToolVersion;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;

  /// `pairemit <command> --name value ...` with every parameter spelled out.
  std::string invocation() const;
};

struct OutputGrid {
  RunRecord record;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.17g, or one of the tokens inf / -inf / nan.
std::string format_number(double value);

/// Shortest decimal that round-trips.
std::string format_parameter(double value);

void write_csv(std::ostream& out, const OutputGrid& grid);
/// `summary`, when not null, is emitted under a "summary" key after "meta".
void write_json(std::ostream& out, const OutputGrid& grid,
                const nlohmann::ordered_json* summary = nullptr);

}  // namespace pairemit::cli
