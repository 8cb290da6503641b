#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"

using namespace pairemit::cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::string* header = nullptr) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      continue;
    }
    if (first) {
      if (header != nullptr) {
        *header = line;
      }
      first = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  const auto start = pos + key.size() + 3;
  return text.substr(start, text.find('\n', start) - start);
}

}  // namespace

TEST_CASE("spectrum at zero velocity") {
  const Result r = invoke({"spectrum", "--v", "0", "--points", "5"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "omega,rate,log10rate");
  REQUIRE(rows.size() == 5);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    CHECK(std::stod(row[1]) == 0.0);
    CHECK(row[2] == "-inf");
  }
}

TEST_CASE("spectrum value near half frequency") {
  const Result r = invoke({"spectrum", "--v", "0.1"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 512);
  double best_gap = 1.0;
  double rate = 0.0;
  for (const auto& row : rows) {
    const double w = std::stod(row[0]);
    if (std::abs(w - 0.5) < best_gap) {
      best_gap = std::abs(w - 0.5);
      rate = std::stod(row[1]);
    }
    const double value = std::stod(row[1]);
    if (value > 0.0) {
      CHECK(std::stod(row[2]) == doctest::Approx(std::log10(value)).epsilon(1e-15));
    }
  }
  CHECK(rate == doctest::Approx(6.35e-5).epsilon(2e-3));
}

TEST_CASE("spectrum maximum near resonance") {
  const Result r = invoke({"spectrum", "--v", "2.9386"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::stod(rows[i][1]) > std::stod(rows[best][1])) {
      best = i;
    }
  }
  CHECK(std::abs(std::stod(rows[best][0]) - 0.5) < 1.0 / 512);
}

TEST_CASE("spectrum json output") {
  const Result r = invoke({"spectrum", "--v", "1", "--points", "8", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["meta"]["command"] == "spectrum");
  CHECK(doc["meta"]["parameters"]["points"] == "8");
  CHECK(doc["data"].size() == 8);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({"spectrum"}).code == kExitUsage);
  CHECK(invoke({"spectrum", "--v", "-1"}).code == kExitUsage);
  CHECK(invoke({"spectrum", "--v", "1", "--mass", "heavy"}).code == kExitUsage);
  CHECK(invoke({"spectrum", "--v", "1", "--omega-min", "0.9", "--omega-max", "0.1"}).code ==
        kExitUsage);
  CHECK(invoke({"spectrum", "--v", "1", "--format", "xml"}).code == kExitUsage);
  CHECK(invoke({"nonsense"}).code == kExitUsage);
  CHECK(invoke({"estimate", "--n2", "0", "--omega-l-over-c", "1e5"}).code == kExitUsage);
  CHECK(invoke({"simulate", "--v", "0.1", "--kappa0", "4"}).code == kExitUsage);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("unwritable output exits 3") {
  CHECK(invoke({"spectrum", "--v", "1", "--out", "/nonexistent-dir/x.csv"}).code == kExitIo);
}

TEST_CASE("file output is byte-identical across runs") {
  const std::filesystem::path a = "cli_test_a.csv";
  const std::filesystem::path b = "cli_test_b.csv";
  REQUIRE(invoke({"scan", "--v-points", "7", "--points", "9", "--out", a.string()}).code == 0);
  REQUIRE(invoke({"scan", "--v-points", "7", "--points", "9", "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("# invocation: pairemit scan --v-min 0.1 --v-max 30 --v-points 7") !=
        std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("scan is velocity-major") {
  const Result r = invoke({"scan", "--v-points", "3", "--points", "4"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "v,omega,rate,log10rate");
  REQUIRE(rows.size() == 12);
  CHECK(std::stod(rows[0][0]) == 0.1);
  CHECK(std::stod(rows[3][0]) == 0.1);
  CHECK(std::stod(rows[4][0]) > 0.1);
  CHECK(std::stod(rows[11][0]) == 30.0);
}

TEST_CASE("integrated scan peaks at resonance and follows both power laws") {
  const Result r = invoke({"scan", "--integrate"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "v,integrated_rate,log10_integrated_rate");
  REQUIRE(rows.size() == 200);
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::stod(rows[i][1]) > std::stod(rows[best][1])) {
      best = i;
    }
  }
  const double v_peak = std::stod(rows[best][0]);
  CHECK(v_peak >= 2.8);
  CHECK(v_peak <= 3.1);

  const auto at = [](const std::string& v) {
    const Result one = invoke({"scan", "--integrate", "--v-min", v, "--v-max", "100", "--v-points", "2"});
    REQUIRE(one.code == 0);
    return std::stod(csv_rows(one.out)[0][1]);
  };
  CHECK(at("0.2") / at("0.1") == doctest::Approx(4.0).epsilon(0.01));
  CHECK(at("15") / at("30") == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("resonance command") {
  const Result photon = invoke({"resonance"});
  REQUIRE(photon.code == 0);
  CHECK(value_after(photon.out, "resonance_velocity") == "2.938534902062");
  CHECK(value_after(photon.out, "closed_form_photon") == "2.938534902062");

  CHECK(invoke({"resonance", "--mass", "0.5"}).code == kExitNoResonance);

  const Result massive = invoke({"resonance", "--mass", "0.1"});
  REQUIRE(massive.code == 0);
  CHECK(std::stod(value_after(massive.out, "resonance_velocity")) > 2.9386);
}

TEST_CASE("estimate command") {
  const Result r = invoke({"estimate", "--n2", "1e-15", "--omega-l-over-c", "1e5", "--v-target", "1"});
  REQUIRE(r.code == 0);
  CHECK(value_after(r.out, "required_intensity_W_per_cm2") == "1e+10");

  const Result at_resonance =
      invoke({"estimate", "--n2", "1e-15", "--omega-l-over-c", "1e5", "--v-target", "2.9386"});
  CHECK(std::stod(value_after(at_resonance.out, "required_intensity_W_per_cm2")) ==
        doctest::Approx(2.9386e10));

  const Result defaulted = invoke({"estimate", "--n2", "1e-15", "--omega-l-over-c", "1e5"});
  const Result doubled = invoke({"estimate", "--n2", "1e-15", "--omega-l-over-c", "2e5"});
  const double base = std::stod(value_after(defaulted.out, "required_intensity_W_per_cm2"));
  CHECK(base == doctest::Approx(2.9385349020623927e10));
  CHECK(std::stod(value_after(doubled.out, "required_intensity_W_per_cm2")) ==
        doctest::Approx(base / 2.0));
}

TEST_CASE("simulate at zero velocity gives a degenerate comparison") {
  const std::filesystem::path report = "cli_test_report.json";
  const Result r = invoke({"simulate", "--v", "0", "--kappa0", "16", "--t0", "100pi", "--compare",
                           "--report", report.string()});
  REQUIRE(r.code == 0);
  for (const auto& row : csv_rows(r.out)) {
    CHECK(std::stod(row[1]) == doctest::Approx(0.0).epsilon(1e-12));
  }
  const auto doc = nlohmann::json::parse(slurp(report));
  CHECK(doc["summary"]["degenerate"] == true);
  CHECK(doc["summary"]["median_deviation"] == 0.0);
  std::filesystem::remove(report);
}

TEST_CASE("simulate report inside the recurrence window") {
  const std::filesystem::path report = "cli_test_window.json";
  const Result r = invoke({"simulate", "--v", "0.2", "--kappa0", "64", "--t0", "100pi", "--compare",
                           "--report", report.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(report));
  CHECK(doc["summary"]["within_recurrence_window"] == true);
  CHECK(doc["summary"]["passed"] == true);
  CHECK(doc["summary"]["max_symplectic_residual"].get<double>() <= 1e-6);
  CHECK(doc["data"].size() > 10);
  std::filesystem::remove(report);
}

TEST_CASE("simulate warns beyond the recurrence window") {
  const Result r = invoke({"simulate", "--v", "0.1", "--kappa0", "16", "--t0", "400pi"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("simulate integrator failure exits 5") {
  // Far above resonance the eight-mode resonator grows without bound.
  const Result r = invoke({"simulate", "--v", "40", "--kappa0", "8", "--t0", "400pi"});
  CHECK(r.code == kExitIntegrator);
}
