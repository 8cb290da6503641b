#pragma once

// Closed-form evaluation of the two-quantum emission spectrum of a medium whose
// optical length oscillates as l(t) = l0 cos(w0 t).
//
// Units: w0 = hbar = c = 1. Frequencies are fractions of the pump frequency,
// velocities are v = w0 l0 / c.

#include <complex>

namespace pairemit {

using Complex = std::complex<double>;

/// Below this modulus the resolvent denominator is treated as zero and the
/// rate is reported as divergent.
inline constexpr double kDefaultDenominatorFloor = 1e-12;

/// The emitted quanta: photons, or Klein-Gordon bosons of mass m.
class Species {
 public:
  constexpr Species() noexcept = default;

  static constexpr Species photon() noexcept { return Species{}; }
  /// Throws DomainError unless mass is finite and non-negative.
  static Species massive(double mass);

  constexpr bool is_photon() const noexcept { return photon_; }
  /// Zero for photons.
  constexpr double mass() const noexcept { return mass_; }
  /// Pair emission requires 2m <= 1.
  constexpr bool above_threshold() const noexcept { return photon_ || 2.0 * mass_ <= 1.0; }

  constexpr bool operator==(const Species&) const noexcept = default;

 private:
  constexpr Species(bool photon, double mass) noexcept : photon_(photon), mass_(mass) {}

  bool photon_ = true;
  double mass_ = 0.0;
};

/// Emission rate density in quanta per unit time per unit frequency.
/// `divergent` marks the resonant pole; `value` is then +infinity.
struct Rate {
  double value = 0.0;
  bool divergent = false;

  static Rate infinite() noexcept;
};

/// Green function of the wave-packet coordinate,
///   G(w) = (1/pi) [1 + (w/2) ln(|1-w| / |1+w|)] + i (w/2) Theta(1-|w|).
/// Throws SingularArgument at |w| == 1 and DomainError for non-finite w.
Complex green_function(double omega);

/// Mass-shifted companion G1(w; m): G(w) with |1-w| -> |2m-w| and
/// Theta(1-|w|) -> Theta(2m-w). Requires w >= 0 and 0 <= m <= 1/2;
/// throws SingularArgument at w == 2m.
Complex green_function_shifted(double omega, double mass);

/// G for photons, G - G1 for massive quanta.
Complex effective_green(double omega, Species species);

/// 1 - v^2 conj(Geff(w)) Geff(1-w). Requires 0 < w < 1.
Complex resolvent_factor(double omega, double v, Species species = Species::photon());

/// Resummed pair-emission rate density at frequency w in [0, 1]:
///
///   dN/dt(w) = (v/pi)^2 Im Geff(w) Im Geff(1-w) / |1 - v^2 conj(Geff(w)) Geff(1-w)|^2
///
/// For photons Im G(w) Im G(1-w) = w(1-w)/4, giving (v/2pi)^2 w(1-w) / |...|^2.
/// Endpoints return 0. A denominator modulus below `floor` returns a
/// divergent Rate.
Rate emission_rate(double omega, double v, Species species = Species::photon(),
                   double floor = kDefaultDenominatorFloor);

/// Lowest-order rate (v/2pi)^2 w(1-w).
double perturbative_rate(double omega, double v);

}  // namespace pairemit
