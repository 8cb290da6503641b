#include "pairemit/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pairemit/errors.hpp"

namespace pairemit {
namespace {

constexpr double kInvPi = std::numbers::inv_pi;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void require_velocity(double v) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError("velocity must be finite and non-negative, got " + std::to_string(v));
  }
}

}  // namespace

Species Species::massive(double mass) {
  if (!std::isfinite(mass) || mass < 0.0) {
    throw DomainError("mass must be finite and non-negative, got " + std::to_string(mass));
  }
  return Species{false, mass};
}

Rate Rate::infinite() noexcept {
  return Rate{std::numeric_limits<double>::infinity(), true};
}

Complex green_function(double omega) {
  require_finite(omega, "frequency");
  const double a = std::abs(omega);
  if (a == 1.0) {
    throw SingularArgument("G(w) has a logarithmic singularity at |w| = 1");
  }
  const double re = kInvPi * (1.0 + 0.5 * omega * std::log(std::abs(1.0 - omega) / std::abs(1.0 + omega)));
  const double im = a < 1.0 ? 0.5 * omega : 0.0;
  return {re, im};
}

Complex green_function_shifted(double omega, double mass) {
  require_finite(omega, "frequency");
  require_finite(mass, "mass");
  if (omega < 0.0) {
    throw DomainError("G1 is defined on w >= 0");
  }
  if (mass < 0.0 || mass > 0.5) {
    throw DomainError("G1 requires 0 <= m <= 1/2, got m = " + std::to_string(mass));
  }
  const double edge = 2.0 * mass;
  if (omega == edge) {
    throw SingularArgument("G1(w; m) has a logarithmic singularity at w = 2m");
  }
  const double re = kInvPi * (1.0 + 0.5 * omega * std::log(std::abs(edge - omega) / (1.0 + omega)));
  const double im = omega < edge ? 0.5 * omega : 0.0;
  return {re, im};
}

Complex effective_green(double omega, Species species) {
  if (species.is_photon()) {
    return green_function(omega);
  }
  return green_function(omega) - green_function_shifted(omega, species.mass());
}

Complex resolvent_factor(double omega, double v, Species species) {
  require_velocity(v);
  if (!(omega > 0.0 && omega < 1.0)) {
    throw DomainError("resolvent factor requires 0 < w < 1");
  }
  const Complex g = effective_green(omega, species);
  const Complex partner = effective_green(1.0 - omega, species);
  return 1.0 - v * v * std::conj(g) * partner;
}

Rate emission_rate(double omega, double v, Species species, double floor) {
  require_velocity(v);
  require_finite(omega, "frequency");
  if (!(floor > 0.0)) {
    throw DomainError("denominator floor must be positive");
  }
  if (omega < 0.0 || omega > 1.0) {
    throw DomainError("emission frequency must lie in [0, 1]");
  }
  if (v == 0.0 || omega == 0.0 || omega == 1.0 || !species.above_threshold()) {
    return {};
  }

  const Complex g = effective_green(omega, species);
  const Complex partner = effective_green(1.0 - omega, species);
  const double numerator = (v * kInvPi) * (v * kInvPi) * g.imag() * partner.imag();
  if (numerator == 0.0) {
    return {};
  }
  const double modulus = std::abs(1.0 - v * v * std::conj(g) * partner);
  if (modulus < floor) {
    return Rate::infinite();
  }
  return {numerator / (modulus * modulus), false};
}

double perturbative_rate(double omega, double v) {
  require_velocity(v);
  require_finite(omega, "frequency");
  if (omega < 0.0 || omega > 1.0) {
    throw DomainError("emission frequency must lie in [0, 1]");
  }
  const double scale = v * 0.5 * kInvPi;
  return scale * scale * omega * (1.0 - omega);
}

}  // namespace pairemit
