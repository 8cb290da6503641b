#include "pairemit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pairemit/errors.hpp"
#include "pairemit/quadrature.hpp"

namespace pairemit {
namespace {

// Relative gap allowed between the n- and 2n-node results.
constexpr double kConvergenceGap = 1e-3;
// Half-width of the velocity window around v_r that switches on adaptive refinement.
constexpr double kResonanceWindow = 0.1;
constexpr std::size_t kPanelNodes = 16;

SpectralSample evaluate_sample(double omega, double v, Species species, double floor) {
  try {
    const Rate rate = emission_rate(omega, v, species, floor);
    return {omega, rate.value, rate.divergent ? SampleStatus::divergent : SampleStatus::ok};
  } catch (const SingularArgument&) {
    return {omega, std::nan(""), SampleStatus::singular};
  }
}

bool inside(double x, double lo, double hi) { return x > lo && x < hi; }

}  // namespace

void PumpConfig::validate() const {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError("pump velocity must be finite and non-negative");
  }
  if (!(denominator_floor > 0.0) || !std::isfinite(denominator_floor)) {
    throw DomainError("denominator floor must be positive");
  }
}

SpectralGrid SpectralGrid::open_uniform(double omega_min, double omega_max, std::size_t points) {
  return {omega_min, omega_max, points, Placement::open_uniform};
}

SpectralGrid SpectralGrid::gauss_legendre(double omega_min, double omega_max,
                                          std::size_t points) {
  return {omega_min, omega_max, points, Placement::gauss_legendre};
}

void SpectralGrid::validate() const {
  if (!(omega_min >= 0.0 && omega_min < omega_max && omega_max <= 1.0)) {
    throw DomainError("spectral grid requires 0 <= omega_min < omega_max <= 1");
  }
  if (points < 2) {
    throw DomainError("spectral grid requires at least 2 points");
  }
}

std::vector<double> SpectralGrid::nodes() const {
  validate();
  if (placement == Placement::gauss_legendre) {
    return GaussLegendre(points).nodes_on(omega_min, omega_max);
  }
  std::vector<double> out(points);
  const double width = (omega_max - omega_min) / static_cast<double>(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = omega_min + (static_cast<double>(i) + 0.5) * width;
  }
  return out;
}

SpectrumResult spectrum_grid(const PumpConfig& pump, const SpectralGrid& grid) {
  pump.validate();
  SpectrumResult result{pump, {}, {}};
  const auto nodes = grid.nodes();
  result.samples.reserve(nodes.size());
  for (const double omega : nodes) {
    result.samples.push_back(evaluate_sample(omega, pump.v, pump.species, pump.denominator_floor));
    if (result.samples.back().status != SampleStatus::ok) {
      result.flagged.push_back(result.samples.size() - 1);
    }
  }
  return result;
}

SpectralGrid default_quadrature() { return SpectralGrid::gauss_legendre(0.0, 1.0, 256); }

IntegratedRate integrated_rate(const PumpConfig& pump, const SpectralGrid& quadrature) {
  pump.validate();
  quadrature.validate();
  const double lo = quadrature.omega_min;
  const double hi = quadrature.omega_max;
  if (pump.v == 0.0 || !pump.species.above_threshold()) {
    return {};
  }

  if (inside(0.5, lo, hi) &&
      emission_rate(0.5, pump.v, pump.species, pump.denominator_floor).divergent) {
    return {std::numeric_limits<double>::infinity(), true, 0.0, 1};
  }

  bool hit_divergence = false;
  std::size_t evaluations = 0;
  const auto integrand = [&](double omega) {
    ++evaluations;
    const Rate rate = emission_rate(omega, pump.v, pump.species, pump.denominator_floor);
    if (rate.divergent) {
      hit_divergence = true;
      return 0.0;
    }
    return rate.value;
  };

  if (quadrature.placement == Placement::open_uniform) {
    const auto nodes = quadrature.nodes();
    const double width = (hi - lo) / static_cast<double>(nodes.size());
    double sum = 0.0;
    for (const double omega : nodes) {
      sum += integrand(omega);
    }
    if (hit_divergence) {
      return {std::numeric_limits<double>::infinity(), true, 0.0, evaluations};
    }
    return {sum * width, false, 0.0, evaluations};
  }

  // Segment boundaries: log singularities of the massive Green function, and
  // the resonant point when close to v_r.
  std::vector<double> breaks{lo, hi};
  if (!pump.species.is_photon()) {
    const double edge = 2.0 * pump.species.mass();
    for (const double b : {edge, 1.0 - edge}) {
      if (inside(b, lo, hi)) {
        breaks.push_back(b);
      }
    }
  }
  bool near_resonance = false;
  try {
    near_resonance = std::abs(pump.v - resonance_velocity(pump.species)) < kResonanceWindow;
  } catch (const NoResonance&) {
  }
  if (near_resonance && inside(0.5, lo, hi)) {
    breaks.push_back(0.5);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  IntegratedRate result;
  if (near_resonance) {
    const GaussLegendre panel(kPanelNodes);
    const AdaptiveResult adaptive = integrate_adaptive(integrand, breaks, panel, {1e-8, 0.0, 4000});
    if (hit_divergence) {
      return {std::numeric_limits<double>::infinity(), true, 0.0, evaluations};
    }
    if (!adaptive.converged && adaptive.error_estimate > kConvergenceGap * std::abs(adaptive.value)) {
      throw QuadratureNotConverged("adaptive refinement near resonance did not converge at v = " +
                                   std::to_string(pump.v));
    }
    result.value = adaptive.value;
    result.error_estimate = adaptive.error_estimate;
  } else {
    const GaussLegendre base(quadrature.points);
    const GaussLegendre refined(2 * quadrature.points);
    double coarse = 0.0;
    double fine = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      coarse += base.integrate(integrand, breaks[i], breaks[i + 1]);
      fine += refined.integrate(integrand, breaks[i], breaks[i + 1]);
    }
    if (hit_divergence) {
      return {std::numeric_limits<double>::infinity(), true, 0.0, evaluations};
    }
    const double gap = std::abs(fine - coarse);
    if (gap > kConvergenceGap * std::abs(fine)) {
      throw QuadratureNotConverged("Gauss-Legendre refinement changed the integral by more than 0.1% at v = " +
                                   std::to_string(pump.v));
    }
    result.value = fine;
    result.error_estimate = gap;
  }
  result.evaluations = evaluations;
  return result;
}

double resonance_velocity_closed_form() {
  const double shift = 4.0 - std::log(3.0);
  return 4.0 * std::numbers::pi / std::sqrt(std::numbers::pi * std::numbers::pi + shift * shift);
}

double resonance_velocity(Species species) {
  if (!species.above_threshold()) {
    throw NoResonance("no pair emission above the threshold 2m > 1");
  }
  // Geff(1 - 1/2) = Geff(1/2), so the resolvent at w = 1/2 is 1 - v^2 |Geff(1/2)|^2.
  const double modulus = std::abs(effective_green(0.5, species));
  if (modulus <= 1e-15) {
    throw NoResonance("effective Green function vanishes at w = 1/2");
  }
  return 1.0 / modulus;
}

ScanResult scan_2d(std::span<const double> velocities, const SpectralGrid& grid, Species species,
                   double floor) {
  ScanResult scan;
  scan.velocities.assign(velocities.begin(), velocities.end());
  scan.omegas = grid.nodes();
  scan.cells.reserve(scan.velocities.size() * scan.omegas.size());
  for (const double v : scan.velocities) {
    PumpConfig{v, species, floor}.validate();
    for (const double omega : scan.omegas) {
      scan.cells.push_back(evaluate_sample(omega, v, species, floor));
    }
  }
  return scan;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo) || !std::isfinite(hi)) {
    throw DomainError("log spacing requires 0 < lo < hi");
  }
  if (points < 2) {
    throw DomainError("log spacing requires at least 2 points");
  }
  std::vector<double> out(points);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::exp(a + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

StimulatedRates stimulated_rate(double omega, const PumpConfig& pump, double occupation) {
  pump.validate();
  if (!std::isfinite(occupation) || occupation < 0.0) {
    throw DomainError("occupation number must be finite and non-negative");
  }
  const Rate spontaneous = emission_rate(omega, pump.v, pump.species, pump.denominator_floor);
  if (spontaneous.divergent) {
    return {spontaneous, spontaneous};
  }
  const Rate enhanced{(1.0 + occupation) * spontaneous.value, false};
  return {enhanced, enhanced};
}

ConjugatePartner conjugate_partner(double omega) {
  if (!(omega > 0.0 && omega < 1.0)) {
    throw DomainError("conjugate partner requires 0 < w < 1");
  }
  return {1.0 - omega, 1.0 / omega - 1.0};
}

double required_intensity(double n2, double omega_l_over_c, double v_target) {
  for (const double x : {n2, omega_l_over_c, v_target}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError("intensity estimate requires positive finite inputs");
    }
  }
  return v_target / (n2 * omega_l_over_c);
}

}  // namespace pairemit
