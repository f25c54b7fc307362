#pragma once

// Integrals of y^-(1+sigma) * L(y): exact values by adaptive quadrature and
// the closed asymptotic forms they are checked against. The (1 + r(t))
// factor of the asymptotic statements is never folded into returned values;
// callers compare ratios against the remainder envelope.

#include <cmath>
#include <stdexcept>

#include "mbpi/quadrature.hpp"
#include "mbpi/slowly_varying.hpp"

namespace mbpi {

// integral_c^t y^-(1+sigma) L(y) dy, computed on the log axis
// (u = ln y) so the near-endpoint mass is resolved cheaply.
inline double lemma2_quadrature(const SlowlyVaryingSpec& L, double sigma,
                                double c, double t, double abs_tol = 1e-10) {
  if (!(0.0 < c && c < t))
    throw std::invalid_argument("lemma2_quadrature: need 0 < c < t");
  // families are defined for y >= 1 only
  if (c < 1.0)
    throw std::invalid_argument("lemma2_quadrature: lower limit below 1");
  auto g = [&](double u) { return std::exp(-sigma * u) * L(std::exp(u)); };
  return integrate_adaptive(g, std::log(c), std::log(t), abs_tol);
}

// Closed asymptotic value:
//   sigma > 0:  (1/sigma) c^-sigma L(t) (1 - mu^sigma),   mu = c/t
//   sigma < 0:  (1/|sigma|) L(t) t^|sigma| (1 - mu^|sigma|)
inline double lemma2_asymptotic(const SlowlyVaryingSpec& L, double sigma,
                                double c, double t) {
  if (!(0.0 < c && c < t))
    throw std::invalid_argument("lemma2_asymptotic: need 0 < c < t");
  if (sigma == 0.0)
    throw std::invalid_argument("lemma2_asymptotic: sigma must be nonzero");
  const double mu = c / t;
  if (sigma > 0.0)
    return (1.0 / sigma) * std::pow(c, -sigma) * L(t) *
           (1.0 - std::pow(mu, sigma));
  const double as = -sigma;
  return (1.0 / as) * L(t) * std::pow(t, as) * (1.0 - std::pow(mu, as));
}

// Error budget accompanying lemma2_asymptotic: the remainder envelope of L
// at t. Zero for the constant family.
inline double lemma2_error_budget(const SlowlyVaryingSpec& L, double t) {
  return L.remainder_envelope(t);
}

// Tail integral asymptotic, integral_t^inf y^-(1+sigma) L(y) dy ~
// (L(t)/sigma) t^-sigma.
inline double lemma3_asymptotic(const SlowlyVaryingSpec& L, double sigma,
                                double t) {
  if (sigma <= 0.0)
    throw std::invalid_argument("lemma3_asymptotic: sigma must be positive");
  if (t < 1.0)
    throw std::invalid_argument("lemma3_asymptotic: t must be >= 1");
  return L(t) / sigma * std::pow(t, -sigma);
}

struct TailIntegral {
  double value;       // quadrature over [t, t_max]
  double tail_bound;  // analytic bound for the discarded [t_max, inf)
};

// Independent oracle for lemma3_asymptotic: quadrature up to
// t_max = tail_factor * t plus an analytic bound for the remainder.
// The bound inflates L(t_max) by a factor of 2 to cover the LogPower
// family's slow growth past the truncation point.
inline TailIntegral lemma3_oracle(const SlowlyVaryingSpec& L, double sigma,
                                  double t, double tail_factor = 1e8,
                                  double abs_tol = 1e-10) {
  if (sigma <= 0.0)
    throw std::invalid_argument("lemma3_oracle: sigma must be positive");
  if (t < 1.0)
    throw std::invalid_argument("lemma3_oracle: t must be >= 1");
  const double t_max = t * tail_factor;
  auto g = [&](double u) { return std::exp(-sigma * u) * L(std::exp(u)); };
  const double value =
      integrate_adaptive(g, std::log(t), std::log(t_max), abs_tol);
  double l_max = L(t_max);
  if (!L.eventually_constant()) l_max *= 2.0;
  return {value, l_max * std::pow(t_max, -sigma) / sigma};
}

}  // namespace mbpi
