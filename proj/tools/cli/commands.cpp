#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <CLI11.hpp>

#include "cli/output.hpp"
#include "pairemit/errors.hpp"
#include "pairemit/modesim.hpp"
#include "pairemit/spectrum.hpp"

namespace pairemit::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Species parse_species(const std::string& text) {
  if (text == "photon") {
    return Species::photon();
  }
  double m = 0.0;
  try {
    std::size_t used = 0;
    m = std::stod(text, &used);
    if (used != text.size()) {
      throw UsageError("");
    }
  } catch (const std::exception&) {
    throw UsageError("--mass expects 'photon' or a non-negative number, got '" + text + "'");
  }
  if (!std::isfinite(m) || m < 0.0) {
    throw UsageError("--mass must be non-negative");
  }
  return Species::massive(m);
}

// Accepts plain numbers and multiples of pi: "314.159", "400pi", "400*pi".
double parse_time(std::string text) {
  double factor = 1.0;
  for (const std::string_view suffix : {"*pi", "pi"}) {
    if (text.size() >= suffix.size() &&
        std::string_view(text).substr(text.size() - suffix.size()) == suffix) {
      text.resize(text.size() - suffix.size());
      factor = std::numbers::pi;
      break;
    }
  }
  try {
    std::size_t used = 0;
    const double value = text.empty() ? 1.0 : std::stod(text, &used);
    if (!text.empty() && used != text.size()) {
      throw UsageError("");
    }
    return value * factor;
  } catch (const std::exception&) {
    throw UsageError("--t0 expects a number or a multiple of pi such as 400pi");
  }
}

// Shortest scientific form that round-trips: 1e+10, 2.9386e+10.
std::string format_scientific(double value) {
  for (int precision = 0; precision <= 17; ++precision) {
    std::string s = fmt::format("{:.{}e}", value, precision);
    if (std::stod(s) == value) {
      return s;
    }
  }
  return fmt::format("{:.17e}", value);
}

double log10_rate(double rate) {
  if (std::isnan(rate)) {
    return rate;
  }
  if (rate == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return std::log10(rate);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  file << text;
  file.flush();
  if (!file) {
    throw IoError("failed writing '" + path + "'");
  }
}

std::string render(const OutputGrid& grid, const std::string& format) {
  std::ostringstream buffer;
  if (format == "json") {
    write_json(buffer, grid);
  } else {
    write_csv(buffer, grid);
  }
  return buffer.str();
}

// -- spectrum ---------------------------------------------------------------

struct SpectrumOptions {
  double v = 0.0;
  std::string mass = "photon";
  double omega_min = 0.001;
  double omega_max = 0.999;
  std::size_t points = 512;
  double floor = kDefaultDenominatorFloor;
  std::string format = "csv";
  std::string out;
};

void add_spectrum_options(CLI::App& cmd, SpectrumOptions& o, bool with_v) {
  if (with_v) {
    cmd.add_option("--v", o.v, "Dimensionless velocity V/c of the optical length")->required();
  }
  cmd.add_option("--mass", o.mass, "'photon' or the boson mass in units hbar w0 / c^2")
      ->capture_default_str();
  cmd.add_option("--omega-min", o.omega_min, "Lower edge of the frequency grid")
      ->capture_default_str();
  cmd.add_option("--omega-max", o.omega_max, "Upper edge of the frequency grid")
      ->capture_default_str();
  cmd.add_option("--points", o.points, "Grid cells; rates are sampled at cell centres")
      ->capture_default_str();
  cmd.add_option("--floor", o.floor, "Resolvent modulus below which a node is divergent")
      ->capture_default_str();
  cmd.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd.add_option("--out", o.out, "Output path (default stdout)");
}

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out) {
  const PumpConfig pump{o.v, parse_species(o.mass), o.floor};
  const SpectrumResult result =
      spectrum_grid(pump, SpectralGrid::open_uniform(o.omega_min, o.omega_max, o.points));

  OutputGrid grid;
  grid.record.command = "spectrum";
  grid.record.parameters = {
      {"v", format_parameter(o.v)},
      {"mass", o.mass},
      {"omega-min", format_parameter(o.omega_min)},
      {"omega-max", format_parameter(o.omega_max)},
      {"points", std::to_string(o.points)},
      {"floor", format_parameter(o.floor)},
      {"format", o.format},
  };
  grid.columns = {"omega", "rate", "log10rate"};
  for (const SpectralSample& s : result.samples) {
    grid.rows.push_back({s.omega, s.rate, log10_rate(s.rate)});
  }
  emit(render(grid, o.format), o.out, out);
  return kExitOk;
}

// -- scan -------------------------------------------------------------------

struct ScanOptions {
  SpectrumOptions spectrum;
  double v_min = 0.1;
  double v_max = 30.0;
  std::size_t v_points = 200;
  bool integrate = false;
  std::size_t quad_points = 256;
};

int cmd_scan(const ScanOptions& o, std::ostream& out) {
  const Species species = parse_species(o.spectrum.mass);
  const auto velocities = log_spaced(o.v_min, o.v_max, o.v_points);

  OutputGrid grid;
  grid.record.command = "scan";
  grid.record.parameters = {
      {"v-min", format_parameter(o.v_min)},
      {"v-max", format_parameter(o.v_max)},
      {"v-points", std::to_string(o.v_points)},
      {"mass", o.spectrum.mass},
      {"floor", format_parameter(o.spectrum.floor)},
      {"format", o.spectrum.format},
  };

  if (o.integrate) {
    grid.record.parameters.emplace_back("integrate", "true");
    grid.record.parameters.emplace_back("quad-points", std::to_string(o.quad_points));
    grid.columns = {"v", "integrated_rate", "log10_integrated_rate"};
    const SpectralGrid quadrature = SpectralGrid::gauss_legendre(0.0, 1.0, o.quad_points);
    for (const double v : velocities) {
      const IntegratedRate r = integrated_rate({v, species, o.spectrum.floor}, quadrature);
      grid.rows.push_back({v, r.value, log10_rate(r.value)});
    }
  } else {
    grid.record.parameters.emplace_back("omega-min", format_parameter(o.spectrum.omega_min));
    grid.record.parameters.emplace_back("omega-max", format_parameter(o.spectrum.omega_max));
    grid.record.parameters.emplace_back("points", std::to_string(o.spectrum.points));
    grid.columns = {"v", "omega", "rate", "log10rate"};
    const ScanResult scan = scan_2d(
        velocities,
        SpectralGrid::open_uniform(o.spectrum.omega_min, o.spectrum.omega_max, o.spectrum.points),
        species, o.spectrum.floor);
    for (std::size_t i = 0; i < scan.velocities.size(); ++i) {
      for (std::size_t j = 0; j < scan.omegas.size(); ++j) {
        const SpectralSample& s = scan.at(i, j);
        grid.rows.push_back({scan.velocities[i], s.omega, s.rate, log10_rate(s.rate)});
      }
    }
  }
  emit(render(grid, o.spectrum.format), o.spectrum.out, out);
  return kExitOk;
}

// -- resonance --------------------------------------------------------------

int cmd_resonance(const std::string& mass, std::ostream& out) {
  const Species species = parse_species(mass);
  const double closed_form = resonance_velocity_closed_form();
  const double v_r = resonance_velocity(species);
  out << "species = " << (species.is_photon() ? "photon" : "massive m=" + mass) << '\n';
  out << fmt::format("resonance_velocity = {:.12f}\n", v_r);
  out << fmt::format("closed_form_photon = {:.12f}\n", closed_form);
  out << fmt::format("difference = {:.3e}\n", v_r - closed_form);
  return kExitOk;
}

// -- simulate ---------------------------------------------------------------

struct SimulateOptions {
  double v = 0.0;
  int kappa0 = 32;
  std::string t0 = "400pi";
  double dt_divisor = 40.0;
  double mode_multiplier = 1.0;
  std::size_t checkpoints = 16;
  std::string integrator = "split4";
  bool exclude_self = false;
  bool compare = false;
  double tolerance = 0.15;
  double band_lo = 0.2;
  double band_hi = 0.8;
  std::string format = "csv";
  std::string out;
  std::string report;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  SimConfig config;
  config.v = o.v;
  config.kappa0 = o.kappa0;
  config.t0 = parse_time(o.t0);
  config.dt_divisor = o.dt_divisor;
  config.mode_multiplier = o.mode_multiplier;
  config.checkpoints = o.checkpoints;
  config.integrator = o.integrator == "rk4" ? Integrator::rk4 : Integrator::split_yoshida4;
  config.exclude_self_coupling = o.exclude_self;
  config.validate();
  if (!config.within_recurrence_window()) {
    err << fmt::format(
        "warning: t0 = {} exceeds the resonator round trip 2 pi kappa0 = {}; discrete pair "
        "resonances dominate and rates will not approach the open-medium spectrum\n",
        config.t0, config.recurrence_time());
  }

  const ModeEnsemble ensemble = build_sim(config);
  const SimRun run = evolve(ensemble, config);
  const SimSpectrum spectrum = extract_rates(run, config);

  RunRecord record;
  record.command = "simulate";
  record.parameters = {
      {"v", format_parameter(o.v)},
      {"kappa0", std::to_string(o.kappa0)},
      {"t0", format_parameter(config.t0)},
      {"dt-divisor", format_parameter(o.dt_divisor)},
      {"mode-multiplier", format_parameter(o.mode_multiplier)},
      {"checkpoints", std::to_string(o.checkpoints)},
      {"integrator", o.integrator},
      {"exclude-self-coupling", o.exclude_self ? "true" : "false"},
      {"format", o.format},
  };

  OutputGrid grid{record, {"omega", "rate_density", "rate_density_closed_form_units", "occupation"}, {}};
  for (const SimSample& s : spectrum.samples) {
    grid.rows.push_back(
        {s.omega, s.rate_density, s.rate_density / kClosedFormDensityScale, s.occupation});
  }
  emit(render(grid, o.format), o.out, out);

  const double residual = run.matrix.max_symplectic_residual();
  err << fmt::format("max symplectic residual: {:.3e}\n", residual);

  if (o.compare) {
    const DeviationReport report = compare_to_analytic(
        spectrum, PumpConfig{o.v, Species::photon()}, {o.band_lo, o.band_hi, o.tolerance});
    RunRecord report_record = record;
    report_record.parameters.emplace_back("compare", "true");
    report_record.parameters.emplace_back("tolerance", format_parameter(o.tolerance));
    report_record.parameters.emplace_back("band-lo", format_parameter(o.band_lo));
    report_record.parameters.emplace_back("band-hi", format_parameter(o.band_hi));
    OutputGrid rows{report_record, {"omega", "simulated", "analytic", "relative_deviation"}, {}};
    for (const ModeDeviation& d : report.modes) {
      rows.rows.push_back({d.omega, d.simulated, d.analytic, d.relative_deviation});
    }
    nlohmann::ordered_json summary;
    summary["median_deviation"] = report.median_deviation;
    summary["max_deviation"] =
        std::isfinite(report.max_deviation) ? nlohmann::ordered_json(report.max_deviation)
                                            : nlohmann::ordered_json(format_number(report.max_deviation));
    summary["tolerance"] = report.tolerance;
    summary["band"] = {report.band_lo, report.band_hi};
    summary["passed"] = report.passed;
    summary["degenerate"] = report.degenerate;
    summary["density_scale"] = kClosedFormDensityScale;
    summary["max_symplectic_residual"] = residual;
    summary["recurrence_time"] = config.recurrence_time();
    summary["within_recurrence_window"] = config.within_recurrence_window();
    std::ostringstream buffer;
    write_json(buffer, rows, &summary);
    emit(buffer.str(), o.report, out);
    err << fmt::format("median deviation {:.4f} (tolerance {}) -> {}{}\n", report.median_deviation,
                       report.tolerance, report.passed ? "pass" : "fail",
                       report.degenerate ? " [degenerate]" : "");
  }
  return kExitOk;
}

// -- estimate ---------------------------------------------------------------

struct EstimateOptions {
  double n2 = 0.0;
  double omega_l_over_c = 0.0;
  std::optional<double> v_target;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
  const double v = o.v_target.value_or(resonance_velocity_closed_form());
  const double intensity = required_intensity(o.n2, o.omega_l_over_c, v);
  out << "n2_cm2_per_W = " << format_scientific(o.n2) << '\n';
  out << "omega_l_over_c = " << format_scientific(o.omega_l_over_c) << '\n';
  out << "v_target = " << format_parameter(v) << '\n';
  out << "required_intensity_W_per_cm2 = " << format_scientific(intensity) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-quantum emission by a medium with oscillating optical length", "pairemit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SpectrumOptions spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Emission rate density over frequency");
  add_spectrum_options(*spectrum_cmd, spectrum, true);

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Velocity scan: 2-D rate grid or integrated rate");
  add_spectrum_options(*scan_cmd, scan.spectrum, false);
  scan_cmd->add_option("--v-min", scan.v_min, "Smallest velocity")->capture_default_str();
  scan_cmd->add_option("--v-max", scan.v_max, "Largest velocity")->capture_default_str();
  scan_cmd->add_option("--v-points", scan.v_points, "Log-spaced velocity count")->capture_default_str();
  scan_cmd->add_flag("--integrate", scan.integrate, "Emit the frequency-integrated rate per velocity");
  scan_cmd->add_option("--quad-points", scan.quad_points, "Gauss-Legendre nodes for --integrate")
      ->capture_default_str();

  std::string resonance_mass = "photon";
  auto* resonance_cmd = app.add_subcommand("resonance", "Velocity at which the w = 1/2 resolvent vanishes");
  resonance_cmd->add_option("--mass", resonance_mass, "'photon' or boson mass")->capture_default_str();

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Time-domain mode simulation of the pair emission");
  sim_cmd->add_option("--v", sim.v, "Dimensionless velocity")->required();
  sim_cmd->add_option("--kappa0", sim.kappa0, "Resonator size w0 L0 / (pi c)")->capture_default_str();
  sim_cmd->add_option("--t0", sim.t0, "Modulation time (number or multiple of pi, e.g. 400pi)")
      ->capture_default_str();
  sim_cmd->add_option("--dt-divisor", sim.dt_divisor, "Steps per period of the fastest mode")
      ->capture_default_str();
  sim_cmd->add_option("--mode-multiplier", sim.mode_multiplier, "Modes up to w = multiplier")
      ->capture_default_str();
  sim_cmd->add_option("--checkpoints", sim.checkpoints, "Occupation snapshots on [t0/2, t0]")
      ->capture_default_str();
  sim_cmd->add_option("--integrator", sim.integrator, "Time stepper")
      ->check(CLI::IsMember({"split4", "rk4"}))
      ->capture_default_str();
  sim_cmd->add_flag("--exclude-self-coupling", sim.exclude_self, "Drop the j == k coupling term");
  sim_cmd->add_flag("--compare", sim.compare, "Write a deviation report against the closed form");
  sim_cmd->add_option("--tolerance", sim.tolerance, "Median deviation tolerance")->capture_default_str();
  sim_cmd->add_option("--band-lo", sim.band_lo, "Comparison band lower edge")->capture_default_str();
  sim_cmd->add_option("--band-hi", sim.band_hi, "Comparison band upper edge")->capture_default_str();
  sim_cmd->add_option("--format", sim.format, "Spectrum output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Spectrum output path (default stdout)");
  sim_cmd->add_option("--report", sim.report, "Deviation report path (default stdout)");

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Laser intensity needed for a target velocity");
  estimate_cmd->add_option("--n2", estimate.n2, "Nonlinear index n2 [cm^2/W]")->required();
  estimate_cmd->add_option("--omega-l-over-c", estimate.omega_l_over_c, "w0 L / c of the excited medium")
      ->required();
  estimate_cmd->add_option("--v-target", estimate.v_target, "Target velocity (default: resonance)");

  std::vector<std::string> argv_storage{"pairemit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) {
    argv.push_back(a.data());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (spectrum_cmd->parsed()) {
      code = cmd_spectrum(spectrum, out);
    } else if (scan_cmd->parsed()) {
      code = cmd_scan(scan, out);
    } else if (resonance_cmd->parsed()) {
      code = cmd_resonance(resonance_mass, out);
    } else if (sim_cmd->parsed()) {
      code = cmd_simulate(sim, out, err);
    } else if (estimate_cmd->parsed()) {
      code = cmd_estimate(estimate, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NoResonance& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoResonance;
  } catch (const IntegratorUnstable& e) {
    err << "error: " << e.what() << '\n';
    return kExitIntegrator;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << fmt::format("wall time: {:.3f} s\n", elapsed.count());
  return code;
}

}  // namespace pairemit::cli
