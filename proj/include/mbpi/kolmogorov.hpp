#pragma once

// Backward-flow machinery: F(t;s) from dR/dt = -f(1-R) with R = 1 - F,
// the norming functions N, tau, M, the invariant-measure GF ingredient
// calM, and the transition GF
//   P_i(t;s) = F(t;s)^i exp{ integral_s^F g(x)/f(x) dx }.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mbpi/ode.hpp"
#include "mbpi/process.hpp"
#include "mbpi/quadrature.hpp"

namespace mbpi {

struct FlowPoint {
  double t = 0.0;
  double s = 0.0;
  double F = 0.0;  // GF value, F(0;s) = s
  double R = 0.0;  // survival tail 1 - F
};

// R' = -f(1-R) expressed directly in R to avoid cancellation near F = 1.
template <class Scalar>
Scalar solve_R(const ProcessSpec& spec, double t, Scalar s,
               double rel_tol = 1e-10) {
  const Scalar r0 = Scalar(1.0) - s;
  if (t == 0.0) return r0;
  auto deriv = [&](double, Scalar r) {
    return -std::pow(r, 1.0 + spec.nu) * spec.L(Scalar(1.0) / r);
  };
  return integrate_ode_scalar<Scalar>(deriv, r0, 0.0, t, rel_tol);
}

// double specialization uses the tail-form evaluators with their domain
// checks intact
inline double solve_R(const ProcessSpec& spec, double t, double s,
                      double rel_tol = 1e-10) {
  if (!(0.0 <= s && s <= 1.0))
    throw std::domain_error("solve_R: s must lie in [0,1]");
  if (s == 1.0) return 0.0;  // absorbing fixed point, F == 1
  const double r0 = 1.0 - s;
  if (t == 0.0) return r0;
  // intermediate RK stages may overshoot [0, 1] slightly; clamp before
  // the tail-form evaluation, which is only defined for r <= 1
  auto deriv = [&](double, double r) {
    const double rc = std::min(std::max(r, 1e-300), 1.0);
    return -std::pow(rc, 1.0 + spec.nu) * spec.L(1.0 / rc);
  };
  return integrate_ode_scalar<double>(deriv, r0, 0.0, t, rel_tol);
}

inline FlowPoint solve_F(const ProcessSpec& spec, double t, double s,
                         double rel_tol = 1e-10) {
  if (t == 0.0) return {t, s, s, 1.0 - s};
  const double r = solve_R(spec, t, s, rel_tol);
  return {t, s, 1.0 - r, r};
}

struct NormingFunctions {
  double calN;  // (nu t)^(1/nu) R(t;0)
  double tau;   // 1 / R(t;0)
  double M;     // nu t (1 - R(t;s)/R(t;0))
};

inline NormingFunctions norming(const ProcessSpec& spec, double t, double s,
                                double rel_tol = 1e-10) {
  if (!(t > 0.0)) throw std::invalid_argument("norming: t must be positive");
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("norming: s must lie in [0,1)");
  const double r0 = solve_R(spec, t, 0.0, rel_tol);
  const double rs = (s == 0.0) ? r0 : solve_R(spec, t, s, rel_tol);
  NormingFunctions out;
  out.calN = std::pow(spec.nu * t, 1.0 / spec.nu) * r0;
  out.tau = 1.0 / r0;
  out.M = spec.nu * t * (1.0 - rs / r0);
  return out;
}

// calM(s) = integral_1^{1/(1-s)} dx / (x^{1-nu} L(x)), the invariant-measure
// GF of the plain branching process.
inline double calM(const ProcessSpec& spec, double s, double abs_tol = 1e-10) {
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("calM: s must lie in [0,1)");
  if (s == 0.0) return 0.0;
  auto g = [&](double u) {
    return std::exp(spec.nu * u) / spec.L(std::exp(u));
  };
  return integrate_adaptive(g, 0.0, -std::log(1.0 - s), abs_tol);
}

// integral_s^F g/f dx after y = 1/(1-x):
//   -integral_{y0}^{y1} y^-(1+gamma) Lhat(y) dy,
// evaluated on the log axis.
inline double transition_exponent(const ProcessSpec& spec, double y0,
                                  double y1, double abs_tol = 1e-10) {
  if (y0 == y1) return 0.0;
  const double gamma = spec.gamma();
  auto g = [&](double u) {
    const double y = std::exp(u);
    return std::exp(-gamma * u) * ratio_sv(spec, y);
  };
  return -integrate_adaptive(g, std::log(y0), std::log(y1), abs_tol);
}

// Complex counterpart along the log-linear path y(u) = exp((1-u) ln y0 +
// u ln y1), which stays in the right half plane for the arguments arising
// from extraction circles.
inline std::complex<double> transition_exponent(
    const ProcessSpec& spec, std::complex<double> y0, std::complex<double> y1,
    double abs_tol = 1e-10) {
  if (y0 == y1) return 0.0;
  const double gamma = spec.gamma();
  const std::complex<double> l0 = std::log(y0), l1 = std::log(y1);
  const std::complex<double> dl = l1 - l0;
  auto g = [&](double u) {
    const std::complex<double> y = std::exp(l0 + u * dl);
    return std::pow(y, -gamma) * ratio_sv(spec, y) * dl;
  };
  return -integrate_adaptive(g, 0.0, 1.0, abs_tol);
}

inline double transition_gf(const ProcessSpec& spec, unsigned i, double t,
                            double s, double rel_tol = 1e-10) {
  if (!(t >= 0.0)) throw std::invalid_argument("transition_gf: t < 0");
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("transition_gf: s must lie in [0,1)");
  const double r = solve_R(spec, t, s, rel_tol);
  const double expo =
      transition_exponent(spec, 1.0 / (1.0 - s), 1.0 / r, rel_tol);
  return std::pow(1.0 - r, static_cast<double>(i)) * std::exp(expo);
}

inline std::complex<double> transition_gf(const ProcessSpec& spec, unsigned i,
                                          double t, std::complex<double> s,
                                          double rel_tol = 1e-10) {
  const std::complex<double> r = solve_R<std::complex<double>>(spec, t, s,
                                                               rel_tol);
  const std::complex<double> expo =
      transition_exponent(spec, 1.0 / (1.0 - s), 1.0 / r, rel_tol);
  return std::pow(1.0 - r, static_cast<double>(i)) * std::exp(expo);
}

// Cross-check route: the exponent as the time integral
// integral_0^t g(F(u;s)) du, accumulated alongside the flow.
inline double transition_gf_time_form(const ProcessSpec& spec, unsigned i,
                                      double t, double s,
                                      double rel_tol = 1e-10) {
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("transition_gf_time_form: s must lie in [0,1)");
  if (t == 0.0) return std::pow(s, static_cast<double>(i));
  auto deriv = [&](double, const std::array<double, 2>& y) {
    const double r = std::min(std::max(y[0], 1e-300), 1.0);
    return std::array<double, 2>{
        -std::pow(r, 1.0 + spec.nu) * spec.L(1.0 / r),
        -std::pow(r, spec.delta) * spec.ell(1.0 / r)};
  };
  const auto end = integrate_ode<double, 2>(deriv, {1.0 - s, 0.0}, 0.0, t,
                                            rel_tol);
  return std::pow(1.0 - end[0], static_cast<double>(i)) * std::exp(end[1]);
}

}  // namespace mbpi
