#include "pairemit/modesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "pairemit/errors.hpp"

namespace pairemit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Column-major K x K state: column j is the trajectory seeded by mode j.
struct State {
  std::size_t size = 0;
  std::vector<Complex> x;
  std::vector<Complex> p;

  Complex* x_col(std::size_t j) { return x.data() + j * size; }
  Complex* p_col(std::size_t j) { return p.data() + j * size; }
};

State initial_state(const ModeEnsemble& ensemble) {
  const std::size_t n = ensemble.size();
  State s{n, std::vector<Complex>(n * n), std::vector<Complex>(n * n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double w = ensemble.frequencies[j];
    const Complex x0 = 1.0 / std::sqrt(2.0 * w);
    s.x[j * n + j] = x0;
    s.p[j * n + j] = Complex(0.0, -w) * x0;
  }
  return s;
}

// Generalised force on every mode of every column from the packet coupling,
// scaled by h: p_k += h * 2 v cos(t) c_k (Q - self term).
void kick(const ModeEnsemble& e, State& s, double t, double h) {
  const double drive = h * 2.0 * e.v * std::cos(t);
  if (drive == 0.0) {
    return;
  }
  const std::size_t n = s.size;
  for (std::size_t j = 0; j < n; ++j) {
    Complex* x = s.x_col(j);
    Complex* p = s.p_col(j);
    Complex packet = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      packet += e.coupling[k] * x[k];
    }
    packet *= e.packet_scale;
    for (std::size_t k = 0; k < n; ++k) {
      Complex q = packet;
      if (e.exclude_self_coupling) {
        q -= e.packet_scale * e.coupling[k] * x[k];
      }
      p[k] += drive * e.coupling[k] * q;
    }
  }
}

struct Rotation {
  std::vector<double> cos;
  std::vector<double> sin_over_w;
  std::vector<double> w_sin;

  Rotation(const std::vector<double>& freqs, double tau)
      : cos(freqs.size()), sin_over_w(freqs.size()), w_sin(freqs.size()) {
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      const double w = freqs[k];
      cos[k] = std::cos(w * tau);
      sin_over_w[k] = std::sin(w * tau) / w;
      w_sin[k] = w * std::sin(w * tau);
    }
  }

  void apply(State& s) const {
    const std::size_t n = s.size;
    for (std::size_t j = 0; j < n; ++j) {
      Complex* x = s.x_col(j);
      Complex* p = s.p_col(j);
      for (std::size_t k = 0; k < n; ++k) {
        const Complex xk = x[k];
        x[k] = cos[k] * xk + sin_over_w[k] * p[k];
        p[k] = cos[k] * p[k] - w_sin[k] * xk;
      }
    }
  }
};

class SplitStepper {
 public:
  SplitStepper(const ModeEnsemble& e, double dt) : e_(e), dt_(dt) {
    const double cbrt2 = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - cbrt2);
    const double w0 = -cbrt2 * w1;
    outer_ = 0.5 * w1;
    inner_ = 0.5 * (w0 + w1);
    kick_outer_ = w1;
    kick_inner_ = w0;
    rot_outer_ = Rotation(e.frequencies, outer_ * dt);
    rot_inner_ = Rotation(e.frequencies, inner_ * dt);
  }

  void step(State& s, double t) const {
    rot_outer_->apply(s);
    kick(e_, s, t + outer_ * dt_, kick_outer_ * dt_);
    rot_inner_->apply(s);
    kick(e_, s, t + (outer_ + inner_) * dt_, kick_inner_ * dt_);
    rot_inner_->apply(s);
    kick(e_, s, t + (outer_ + 2.0 * inner_) * dt_, kick_outer_ * dt_);
    rot_outer_->apply(s);
  }

 private:
  const ModeEnsemble& e_;
  double dt_;
  double outer_ = 0.0;
  double inner_ = 0.0;
  double kick_outer_ = 0.0;
  double kick_inner_ = 0.0;
  std::optional<Rotation> rot_outer_;
  std::optional<Rotation> rot_inner_;
};

class RungeKuttaStepper {
 public:
  RungeKuttaStepper(const ModeEnsemble& e, double dt) : e_(e), dt_(dt) {}

  void step(State& s, double t) const {
    const std::size_t m = s.x.size();
    State k1 = derivative(s, t);
    State mid = advance(s, k1, 0.5 * dt_);
    State k2 = derivative(mid, t + 0.5 * dt_);
    mid = advance(s, k2, 0.5 * dt_);
    State k3 = derivative(mid, t + 0.5 * dt_);
    mid = advance(s, k3, dt_);
    State k4 = derivative(mid, t + dt_);
    const double sixth = dt_ / 6.0;
    for (std::size_t i = 0; i < m; ++i) {
      s.x[i] += sixth * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
      s.p[i] += sixth * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
    }
  }

 private:
  static State advance(const State& s, const State& d, double h) {
    State out = s;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out.x[i] += h * d.x[i];
      out.p[i] += h * d.p[i];
    }
    return out;
  }

  // (x, p)' = (p, -w^2 x + force); the force reuses kick() with unit weight
  // applied to a zeroed momentum buffer.
  State derivative(const State& s, double t) const {
    const std::size_t n = s.size;
    State d{n, s.p, std::vector<Complex>(s.p.size())};
    State probe{n, s.x, std::vector<Complex>(s.p.size())};
    kick(e_, probe, t, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double w = e_.frequencies[k];
        d.p[j * n + k] = probe.p[j * n + k] - w * w * s.x[j * n + k];
      }
    }
    return d;
  }

  const ModeEnsemble& e_;
  double dt_;
};

void check_bounded(const State& s, double bound, double t) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double a = std::abs(s.x[i]);
    const double b = std::abs(s.p[i]);
    if (!std::isfinite(a) || !std::isfinite(b) || a > bound || b > bound) {
      throw IntegratorUnstable("mode amplitude exceeded " + std::to_string(bound) + " at t = " +
                               std::to_string(t));
    }
  }
}

// Projects the state onto the free positive/negative frequency parts of every
// output mode at time t.
BogoliubovMatrix project(const ModeEnsemble& e, const State& s, double t) {
  const std::size_t n = s.size;
  BogoliubovMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = e.frequencies[k];
    const double norm = std::sqrt(0.5 * w);
    const Complex phase = std::polar(1.0, w * t);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex x = s.x[j * n + k];
      const Complex p = s.p[j * n + k];
      m.mu(k, j) = norm * (x + Complex(0.0, 1.0 / w) * p) * phase;
      m.nu(k, j) = norm * (std::conj(x) + Complex(0.0, 1.0 / w) * std::conj(p)) * phase;
    }
  }
  return m;
}

std::vector<double> occupations(const ModeEnsemble& e, const State& s, double t) {
  const BogoliubovMatrix m = project(e, s, t);
  std::vector<double> out(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    out[k] = m.occupation(k);
  }
  return out;
}

std::vector<std::size_t> checkpoint_steps(std::size_t steps, std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(static_cast<std::size_t>(std::llround(frac * static_cast<double>(steps))));
  }
  out.back() = steps;
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class Stepper>
SimRun run_with(const Stepper& stepper, const ModeEnsemble& e, const SimConfig& config) {
  const std::size_t steps = config.step_count();
  const double dt = config.time_step();
  const auto marks = checkpoint_steps(steps, config.checkpoints);

  State state = initial_state(e);
  SimRun run;
  std::size_t next_mark = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    stepper.step(state, static_cast<double>(s) * dt);
    const std::size_t done = s + 1;
    if (done % 256 == 0) {
      check_bounded(state, config.amplitude_bound, static_cast<double>(done) * dt);
    }
    if (next_mark < marks.size() && done == marks[next_mark]) {
      const double t = static_cast<double>(done) * dt;
      check_bounded(state, config.amplitude_bound, t);
      run.checkpoint_times.push_back(t);
      run.occupations.push_back(occupations(e, state, t));
      ++next_mark;
    }
  }
  run.matrix = project(e, state, static_cast<double>(steps) * dt);
  return run;
}

}  // namespace

void SimConfig::validate() const {
  if (kappa0 < 8) {
    throw DomainError("kappa0 must be at least 8");
  }
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError("velocity must be finite and non-negative");
  }
  if (!std::isfinite(t0) || t0 < 50.0 * kTwoPi) {
    throw DomainError("t0 must cover at least 50 pump periods (t0 >= 100 pi)");
  }
  if (!std::isfinite(dt_divisor) || dt_divisor < 20.0) {
    throw DomainError("dt divisor must be at least 20 steps per fastest period");
  }
  if (!std::isfinite(mode_multiplier) || mode_multiplier < 1.0) {
    throw DomainError("mode multiplier must be at least 1");
  }
  if (checkpoints < 2) {
    throw DomainError("at least two checkpoints are needed for the rate fit");
  }
  if (!(amplitude_bound > 0.0)) {
    throw DomainError("amplitude bound must be positive");
  }
}

std::size_t SimConfig::mode_count() const {
  return static_cast<std::size_t>(std::floor(mode_multiplier * kappa0 + 1e-9));
}

double SimConfig::max_frequency() const {
  return static_cast<double>(mode_count()) / kappa0;
}

std::size_t SimConfig::step_count() const {
  const double dt_max = kTwoPi / (dt_divisor * max_frequency());
  return static_cast<std::size_t>(std::ceil(t0 / dt_max - 1e-9));
}

double SimConfig::time_step() const { return t0 / static_cast<double>(step_count()); }

double SimConfig::recurrence_time() const { return kTwoPi * kappa0; }

ModeEnsemble build_sim(const SimConfig& config) {
  config.validate();
  ModeEnsemble e;
  const std::size_t n = config.mode_count();
  e.frequencies.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    e.frequencies[k] = static_cast<double>(k + 1) / config.kappa0;
  }
  e.coupling = e.frequencies;
  e.packet_scale = 1.0 / (std::numbers::pi * config.kappa0);
  e.v = config.v;
  e.exclude_self_coupling = config.exclude_self_coupling;
  return e;
}

BogoliubovMatrix::BogoliubovMatrix(std::size_t size)
    : size_(size), mu_(size * size), nu_(size * size) {}

double BogoliubovMatrix::occupation(std::size_t k) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < size_; ++j) {
    sum += std::norm(nu(k, j));
  }
  return sum;
}

double BogoliubovMatrix::symplectic_residual(std::size_t k) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < size_; ++j) {
    sum += std::norm(mu(k, j)) - std::norm(nu(k, j));
  }
  return sum - 1.0;
}

double BogoliubovMatrix::max_symplectic_residual() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < size_; ++k) {
    worst = std::max(worst, std::abs(symplectic_residual(k)));
  }
  return worst;
}

SimRun evolve(const ModeEnsemble& ensemble, const SimConfig& config) {
  config.validate();
  if (ensemble.size() != config.mode_count()) {
    throw DomainError("ensemble does not match the configuration");
  }
  const double dt = config.time_step();
  switch (config.integrator) {
    case Integrator::rk4:
      return run_with(RungeKuttaStepper(ensemble, dt), ensemble, config);
    case Integrator::split_yoshida4:
    default:
      return run_with(SplitStepper(ensemble, dt), ensemble, config);
  }
}

SimSpectrum extract_rates(const SimRun& run, const SimConfig& config, double band_lo,
                          double band_hi) {
  SimSpectrum out{config.v, config.kappa0, config.t0, {}};
  const std::size_t c = run.checkpoint_times.size();
  if (c < 2) {
    throw DomainError("rate fit needs at least two checkpoints");
  }
  double t_mean = 0.0;
  for (const double t : run.checkpoint_times) {
    t_mean += t;
  }
  t_mean /= static_cast<double>(c);
  double t_var = 0.0;
  for (const double t : run.checkpoint_times) {
    t_var += (t - t_mean) * (t - t_mean);
  }

  const std::size_t modes = run.matrix.size();
  for (std::size_t k = 0; k < modes; ++k) {
    const double omega = static_cast<double>(k + 1) / config.kappa0;
    if (!(omega > band_lo && omega < band_hi)) {
      continue;
    }
    double n_mean = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      n_mean += run.occupations[i][k];
    }
    n_mean /= static_cast<double>(c);
    double cov = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      cov += (run.checkpoint_times[i] - t_mean) * (run.occupations[i][k] - n_mean);
    }
    const double slope = cov / t_var;
    out.samples.push_back({omega, slope * config.kappa0, run.matrix.occupation(k)});
  }
  return out;
}

DeviationReport compare_to_analytic(const SimSpectrum& sim, const PumpConfig& pump,
                                    const CompareOptions& options) {
  pump.validate();
  if (sim.v != pump.v) {
    throw DomainError("simulated and analytic velocities differ");
  }
  DeviationReport report;
  report.tolerance = options.tolerance;
  report.band_lo = options.band_lo;
  report.band_hi = options.band_hi;
  report.degenerate = true;

  std::vector<double> deviations;
  for (const SimSample& s : sim.samples) {
    if (!(s.omega > options.band_lo && s.omega < options.band_hi)) {
      continue;
    }
    const Rate analytic = emission_rate(s.omega, pump.v, pump.species, pump.denominator_floor);
    ModeDeviation d{s.omega, s.rate_density / kClosedFormDensityScale, analytic.value, 0.0};
    if (analytic.divergent) {
      d.relative_deviation = std::numeric_limits<double>::infinity();
      report.degenerate = false;
    } else if (analytic.value > 0.0) {
      d.relative_deviation = std::abs(d.simulated - d.analytic) / d.analytic;
      report.degenerate = false;
    } else {
      d.relative_deviation =
          std::abs(d.simulated) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    deviations.push_back(d.relative_deviation);
    report.modes.push_back(d);
  }
  if (deviations.empty()) {
    report.degenerate = true;
    report.passed = false;
    return report;
  }

  report.max_deviation = *std::max_element(deviations.begin(), deviations.end());
  std::sort(deviations.begin(), deviations.end());
  const std::size_t n = deviations.size();
  report.median_deviation =
      n % 2 == 1 ? deviations[n / 2] : 0.5 * (deviations[n / 2 - 1] + deviations[n / 2]);
  report.passed = report.median_deviation <= options.tolerance;
  return report;
}

}  // namespace pairemit
