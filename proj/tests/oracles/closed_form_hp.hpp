#pragma once

// 50-digit evaluation of the closed forms, written directly from the formulas
// with no shared code path to the library. Used to derive frozen expected
// values and as a pointwise reference.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real pi() { return boost::math::constants::pi<Real>(); }

struct HpComplex {
  Real re;
  Real im;

  std::complex<double> to_double() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
};

inline HpComplex green(const Real& w) {
  using boost::multiprecision::abs;
  using boost::multiprecision::log;
  const Real re = (1 + (w / 2) * log(abs(1 - w) / abs(1 + w))) / pi();
  const Real im = abs(w) < 1 ? w / 2 : Real(0);
  return {re, im};
}

inline HpComplex green_shifted(const Real& w, const Real& m) {
  using boost::multiprecision::abs;
  using boost::multiprecision::log;
  const Real re = (1 + (w / 2) * log(abs(2 * m - w) / abs(1 + w))) / pi();
  const Real im = w < 2 * m ? w / 2 : Real(0);
  return {re, im};
}

inline HpComplex effective(const Real& w, const Real* mass) {
  HpComplex g = green(w);
  if (mass != nullptr) {
    const HpComplex g1 = green_shifted(w, *mass);
    g.re -= g1.re;
    g.im -= g1.im;
  }
  return g;
}

/// 1 - v^2 conj(a) b
inline HpComplex resolvent(const Real& w, const Real& v, const Real* mass = nullptr) {
  const HpComplex a = effective(w, mass);
  const HpComplex b = effective(1 - w, mass);
  const Real re = a.re * b.re + a.im * b.im;
  const Real im = a.re * b.im - a.im * b.re;
  return {1 - v * v * re, -v * v * im};
}

/// (v/pi)^2 Im Geff(w) Im Geff(1-w) / |resolvent|^2
inline Real rate(const Real& w, const Real& v, const Real* mass = nullptr) {
  const HpComplex a = effective(w, mass);
  const HpComplex b = effective(1 - w, mass);
  const HpComplex r = resolvent(w, v, mass);
  return (v / pi()) * (v / pi()) * a.im * b.im / (r.re * r.re + r.im * r.im);
}

inline Real resonance_closed_form() {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const Real s = 4 - log(Real(3));
  return 4 * pi() / sqrt(pi() * pi() + s * s);
}

}  // namespace oracle
