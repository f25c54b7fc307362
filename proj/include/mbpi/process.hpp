#pragma once

// The branching/immigration pair: offspring generating function
//   f(s) = (1-s)^(1+nu) * L(1/(1-s))
// and immigration generating function
//   g(s) = -(1-s)^delta * l(1/(1-s)),
// with 0 < nu, delta < 1. gamma = delta - nu selects the regime.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mbpi/slowly_varying.hpp"

namespace mbpi {

struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProcessSpec {
  double nu = 0.5;
  double delta = 0.5;
  SlowlyVaryingSpec L = SlowlyVaryingSpec::constant(1.0);    // offspring part
  SlowlyVaryingSpec ell = SlowlyVaryingSpec::constant(1.0);  // immigration part

  double gamma() const { return delta - nu; }

  bool ratio_limit_exists() const {
    return L.eventually_constant() && ell.eventually_constant();
  }

  // C = lim l(x)/L(x) for eventually-constant families.
  double ratio_limit() const {
    if (!ratio_limit_exists())
      throw std::logic_error("ratio_limit: families do not converge to constants");
    return ell.limit_constant() / L.limit_constant();
  }

  void validate() const {
    if (!(0.0 < nu && nu < 1.0))
      throw std::invalid_argument("ProcessSpec: nu must lie in (0,1)");
    if (!(0.0 < delta && delta < 1.0))
      throw std::invalid_argument("ProcessSpec: delta must lie in (0,1)");
    if (L.scale <= 0.0 || ell.scale <= 0.0)
      throw std::invalid_argument("ProcessSpec: slowly varying scales must be positive");
  }
};

inline double f_eval(const ProcessSpec& spec, double s) {
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("f_eval: s must lie in [0,1)");
  const double r = 1.0 - s;
  return std::pow(r, 1.0 + spec.nu) * spec.L(1.0 / r);
}

inline double g_eval(const ProcessSpec& spec, double s) {
  if (!(0.0 <= s && s <= 1.0))
    throw std::domain_error("g_eval: s must lie in [0,1]");
  if (s == 1.0) return 0.0;
  const double r = 1.0 - s;
  return -std::pow(r, spec.delta) * spec.ell(1.0 / r);
}

// ratio generating-function ingredient, Lhat(y) = l(y)/L(y)
inline double ratio_sv(const ProcessSpec& spec, double y) {
  return spec.ell(y) / spec.L(y);
}

inline std::complex<double> ratio_sv(const ProcessSpec& spec,
                                     const std::complex<double>& y) {
  return spec.ell(y) / spec.L(y);
}

// Complex continuations, used by the coefficient-extraction path.
inline std::complex<double> f_eval(const ProcessSpec& spec,
                                   const std::complex<double>& s) {
  const std::complex<double> r = 1.0 - s;
  return std::pow(r, 1.0 + spec.nu) * spec.L(1.0 / r);
}

inline std::complex<double> g_eval(const ProcessSpec& spec,
                                   const std::complex<double>& s) {
  const std::complex<double> r = 1.0 - s;
  return -std::pow(r, spec.delta) * spec.ell(1.0 / r);
}

// Lhat(y) - C for eventually-constant families, computed from the
// remainder terms only. The constant parts cancel exactly by the
// definition C = c_ell / c_L; forming the difference of the full values
// instead loses everything to roundoff once the remainders drop below
// one ulp of the constants, which matters wherever the excess is
// multiplied by a growing factor.
inline double ratio_sv_excess(const ProcessSpec& spec, double y) {
  if (!spec.ratio_limit_exists())
    throw std::logic_error("ratio_sv_excess: families do not converge to constants");
  double num = 0.0;  // (ell(y) - C L(y)) / c_ell
  if (spec.ell.family == SvFamily::WithRemainder)
    num += spec.ell.rem_amp * std::pow(y, -spec.ell.rem_decay);
  if (spec.L.family == SvFamily::WithRemainder)
    num -= spec.L.rem_amp * std::pow(y, -spec.L.rem_decay);
  return spec.ell.scale * num / spec.L(y);
}

inline std::complex<double> ratio_sv_excess(const ProcessSpec& spec,
                                            const std::complex<double>& y) {
  if (!spec.ratio_limit_exists())
    throw std::logic_error("ratio_sv_excess: families do not converge to constants");
  std::complex<double> num = 0.0;
  if (spec.ell.family == SvFamily::WithRemainder)
    num += spec.ell.rem_amp * std::pow(y, -spec.ell.rem_decay);
  if (spec.L.family == SvFamily::WithRemainder)
    num -= spec.L.rem_amp * std::pow(y, -spec.L.rem_decay);
  return spec.ell.scale * num / spec.L(y);
}

// Lambda(y) = y^nu * L(1/y), the norming ingredient of the gamma > 0
// invariant-GF approximation.
inline double capital_lambda(const ProcessSpec& spec, double y) {
  return std::pow(y, spec.nu) * spec.L(1.0 / y);
}

}  // namespace mbpi
