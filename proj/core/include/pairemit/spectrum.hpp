#pragma once

// Spectra on frequency grids, integrated emission, resonance location,
// velocity scans and the stimulated / phase-conjugate bookkeeping built on
// top of the closed-form kernel.

#include <cstddef>
#include <span>
#include <vector>

#include "pairemit/kernel.hpp"

namespace pairemit {

struct PumpConfig {
  double v = 0.0;
  Species species = Species::photon();
  double denominator_floor = kDefaultDenominatorFloor;

  /// Throws DomainError for v < 0, non-finite v or a non-positive floor.
  void validate() const;
};

enum class Placement {
  /// Cell midpoints of `points` equal cells spanning [omega_min, omega_max].
  open_uniform,
  /// Gauss-Legendre nodes on [omega_min, omega_max].
  gauss_legendre,
};

struct SpectralGrid {
  double omega_min = 0.0;
  double omega_max = 1.0;
  std::size_t points = 256;
  Placement placement = Placement::gauss_legendre;

  static SpectralGrid open_uniform(double omega_min, double omega_max, std::size_t points);
  static SpectralGrid gauss_legendre(double omega_min, double omega_max, std::size_t points);

  /// Requires 0 <= omega_min < omega_max <= 1 and points >= 2.
  void validate() const;
  /// Ascending sample frequencies; never includes omega_min or omega_max.
  std::vector<double> nodes() const;
};

enum class SampleStatus {
  ok,
  divergent,  // resolvent modulus under the floor
  singular,   // node sits on a logarithmic singularity of Geff
};

struct SpectralSample {
  double omega = 0.0;
  double rate = 0.0;
  SampleStatus status = SampleStatus::ok;
};

struct SpectrumResult {
  PumpConfig pump;
  std::vector<SpectralSample> samples;  // ascending in omega
  std::vector<std::size_t> flagged;     // indices of non-ok samples
};

/// Evaluates the emission rate at every node. Per-node kernel failures are
/// recorded in the sample status instead of aborting the grid.
SpectrumResult spectrum_grid(const PumpConfig& pump, const SpectralGrid& grid);

struct IntegratedRate {
  double value = 0.0;
  bool divergent = false;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Default rule for integrated_rate: 256 Gauss-Legendre nodes on [0, 1].
SpectralGrid default_quadrature();

/// Integral of the emission rate over the quadrature interval.
///
/// Away from resonance the Gauss-Legendre rule is applied on every smooth
/// segment with n and 2n nodes; their relative difference must stay within
/// 0.1% or QuadratureNotConverged is thrown. Within 0.1 of the resonance
/// velocity the interval is split at w = 1/2 and refined adaptively. If the
/// resolvent at w = 1/2 is under the floor the result is flagged divergent.
IntegratedRate integrated_rate(const PumpConfig& pump,
                               const SpectralGrid& quadrature = default_quadrature());

/// 4 pi / sqrt(pi^2 + (4 - ln 3)^2).
double resonance_velocity_closed_form();

/// Velocity that nulls the resolvent at w = 1/2, i.e. 1 / |Geff(1/2)|.
/// Throws NoResonance when Geff(1/2) vanishes.
double resonance_velocity(Species species = Species::photon());

/// Row-major matrix of samples: one row per velocity, one column per node.
struct ScanResult {
  std::vector<double> velocities;
  std::vector<double> omegas;
  std::vector<SpectralSample> cells;

  const SpectralSample& at(std::size_t row, std::size_t column) const {
    return cells[row * omegas.size() + column];
  }
};

ScanResult scan_2d(std::span<const double> velocities, const SpectralGrid& grid,
                   Species species = Species::photon(),
                   double floor = kDefaultDenominatorFloor);

/// `points` values log-spaced on [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, std::size_t points);

struct StimulatedRates {
  Rate same_wavevector;
  Rate conjugate_wavevector;
};

/// With N_q quanta already present at wavevector q, both the q mode and the
/// conjugate mode -alpha q emit at (1 + N_q) times the spontaneous rate.
StimulatedRates stimulated_rate(double omega, const PumpConfig& pump, double occupation);

struct ConjugatePartner {
  double omega = 0.0;  // 1 - w
  double alpha = 0.0;  // 1/w - 1, ratio of partner to input wavenumber
};

/// Requires 0 < w < 1.
ConjugatePartner conjugate_partner(double omega);

/// Laser intensity [W/cm^2] for which v = n2 I (w0 L / c) reaches v_target.
double required_intensity(double n2, double omega_l_over_c, double v_target);

}  // namespace pairemit
