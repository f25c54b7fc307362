#pragma once

// Limit generating functions of the immigration chain and their
// coefficient measures:
//   gamma > 0:  w(s)  = exp{-integral_{1/(1-s)}^inf y^-(1+gamma) Lhat(y) dy}
//   gamma < 0:  pi(s) = exp{(1-s)^-|gamma|} * B(s), with B from the
//               combined integrand g/f + |gamma| (1-u)^-(1+|gamma|).
// The singular pieces are always integrated as a combined bracket after
// the substitution y = 1/(1-u); each term alone diverges.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mbpi/kolmogorov.hpp"
#include "mbpi/process.hpp"
#include "mbpi/quadrature.hpp"
#include "mbpi/series.hpp"

namespace mbpi {

namespace detail {

// integral_{y0}^inf y^-(1+gamma) Lhat(y) dy for gamma > 0, log axis plus
// analytic tail estimate added in (constant-family tail is exact).
inline double sv_tail_integral(const ProcessSpec& spec, double y0,
                               double abs_tol = 1e-10) {
  const double gamma = spec.gamma();
  const double y_max = y0 * 1e8;
  auto g = [&](double u) {
    return std::exp(-gamma * u) * ratio_sv(spec, std::exp(u));
  };
  const double body =
      integrate_adaptive(g, std::log(y0), std::log(y_max), abs_tol);
  return body + ratio_sv(spec, y_max) * std::pow(y_max, -gamma) / gamma;
}

// decay exponent of |Lhat(y) - C| for eventually-constant families
inline double ratio_envelope_decay(const ProcessSpec& spec) {
  double decay = std::numeric_limits<double>::infinity();
  if (spec.L.family == SvFamily::WithRemainder)
    decay = std::min(decay, spec.L.rem_decay);
  if (spec.ell.family == SvFamily::WithRemainder)
    decay = std::min(decay, spec.ell.rem_decay);
  return decay;
}

}  // namespace detail

inline void require_positive_recurrent(const ProcessSpec& spec) {
  if (!(spec.gamma() > 0.0))
    throw RegimeError("operation requires gamma > 0 (positive recurrent regime)");
}

// Guards for the transient limit: gamma < 0, Lhat -> C = |gamma|, and the
// approach must be fast enough for the combined bracket to be integrable.
inline void require_transient_balanced(const ProcessSpec& spec) {
  if (!(spec.gamma() < 0.0))
    throw RegimeError("operation requires gamma < 0 (transient regime)");
  if (!spec.ratio_limit_exists())
    throw RegimeError("transient limit requires eventually-constant SV families");
  const double ag = -spec.gamma();
  if (std::abs(spec.ratio_limit() - ag) > 1e-12)
    throw RegimeError("transient limit requires C = |gamma| in the ratio condition");
  const double decay = detail::ratio_envelope_decay(spec);
  if (decay <= ag && std::isfinite(decay))
    throw RegimeError("transient limit: remainder decay too slow, bracket integral diverges");
}

inline double w_gf(const ProcessSpec& spec, double s, double abs_tol = 1e-10) {
  require_positive_recurrent(spec);
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("w_gf: s must lie in [0,1)");
  return std::exp(-detail::sv_tail_integral(spec, 1.0 / (1.0 - s), abs_tol));
}

// Complex continuation: split the tail at y = 1 and carry the finite part
// along a log-linear path.
inline std::complex<double> w_gf(const ProcessSpec& spec,
                                 std::complex<double> s,
                                 double abs_tol = 1e-10) {
  require_positive_recurrent(spec);
  const double full = detail::sv_tail_integral(spec, 1.0, abs_tol);
  const double gamma = spec.gamma();
  const std::complex<double> l1 = std::log(1.0 / (1.0 - s));
  auto g = [&](double u) {
    const std::complex<double> y = std::exp(u * l1);
    return std::pow(y, -gamma) * ratio_sv(spec, y) * l1;
  };
  const std::complex<double> head = integrate_adaptive(g, 0.0, 1.0, abs_tol);
  return std::exp(-(full - head));
}

// Closed approximation of w near s = 1: exp{ g(s) / (gamma Lambda(1-s)) }
// with Lambda(y) = y^nu L(1/y). Note g <= 0, so the exponent is negative.
inline double theorem3_approx(const ProcessSpec& spec, double s) {
  require_positive_recurrent(spec);
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("theorem3_approx: s must lie in [0,1)");
  return std::exp(g_eval(spec, s) /
                  (spec.gamma() * capital_lambda(spec, 1.0 - s)));
}

namespace detail {

// J(y0) = integral_{y0}^inf y^(|gamma|-1) (|gamma| - Lhat(y)) dy; the
// integrand decays like y^(|gamma|-1-decay), so the truncation point is
// pushed until the analytic tail bound is negligible.
inline double bracket_integral(const ProcessSpec& spec, double y0,
                               double abs_tol = 1e-10) {
  const double ag = -spec.gamma();
  const double decay = ratio_envelope_decay(spec);
  if (!std::isfinite(decay)) {
    // both families constant with C = |gamma|: integrand vanishes
    return 0.0;
  }
  const double margin = decay - ag;  // > 0, enforced by the regime guard
  double log_span = std::min(40.0 * std::log(10.0) / margin, 600.0);
  // ag - Lhat must come from the remainder terms; the naive difference
  // collapses to ulp noise that the e^{ag u} factor then amplifies
  auto g = [&](double u) {
    const double y = std::exp(u);
    return -std::exp(ag * u) * ratio_sv_excess(spec, y);
  };
  const double lo = std::log(y0);
  return integrate_adaptive(g, lo, lo + log_span, abs_tol);
}

inline std::complex<double> bracket_integral_path(
    const ProcessSpec& spec, std::complex<double> y0, std::complex<double> y1,
    double abs_tol = 1e-10) {
  const double ag = -spec.gamma();
  const std::complex<double> l0 = std::log(y0), l1 = std::log(y1);
  const std::complex<double> dl = l1 - l0;
  auto g = [&](double u) {
    const std::complex<double> y = std::exp(l0 + u * dl);
    return -std::pow(y, ag) * ratio_sv_excess(spec, y) * dl;
  };
  return integrate_adaptive(g, 0.0, 1.0, abs_tol);
}

}  // namespace detail

inline double B_gf(const ProcessSpec& spec, double s, double abs_tol = 1e-10) {
  require_transient_balanced(spec);
  if (!(0.0 <= s && s <= 1.0))
    throw std::domain_error("B_gf: s must lie in [0,1]");
  if (s == 1.0) return 1.0;
  return std::exp(detail::bracket_integral(spec, 1.0 / (1.0 - s), abs_tol));
}

inline double pi_gf(const ProcessSpec& spec, double s, double abs_tol = 1e-10) {
  require_transient_balanced(spec);
  if (!(0.0 <= s && s < 1.0))
    throw std::domain_error("pi_gf: s must lie in [0,1)");
  const double ag = -spec.gamma();
  return std::exp(std::pow(1.0 - s, -ag) +
                  detail::bracket_integral(spec, 1.0 / (1.0 - s), abs_tol));
}

inline std::complex<double> pi_gf(const ProcessSpec& spec,
                                  std::complex<double> s,
                                  double abs_tol = 1e-10) {
  require_transient_balanced(spec);
  const double ag = -spec.gamma();
  const double full = detail::bracket_integral(spec, 1.0, abs_tol);
  const std::complex<double> head =
      detail::bracket_integral_path(spec, 1.0, 1.0 / (1.0 - s), abs_tol);
  return std::exp(std::pow(1.0 - s, -ag) + (full - head));
}

// Schroeder residual w(F(tau;s)) P(tau;s) - w(s); zero at tau = 0 by
// construction of the flow.
inline double check_schroder(const ProcessSpec& spec, double tau, double s,
                             double rel_tol = 1e-10) {
  require_positive_recurrent(spec);
  const FlowPoint fp = solve_F(spec, tau, s, rel_tol);
  return w_gf(spec, fp.F, rel_tol) * transition_gf(spec, 0, tau, s, rel_tol) -
         w_gf(spec, s, rel_tol);
}

enum class MeasureKind { W, Pi };

struct InvariantMeasure {
  MeasureKind kind;
  SeriesCoefficients coeffs;
  double value_at_zero;  // GF at s = 0

  void validate() const {
    for (double c : coeffs.coeffs)
      if (c < -1e-10)
        throw std::runtime_error("InvariantMeasure: negative coefficient");
  }
};

inline InvariantMeasure build_w_measure(const ProcessSpec& spec, std::size_t N,
                                        double radius = 0.7) {
  require_positive_recurrent(spec);
  auto eval = [&](const std::complex<double>& z) { return w_gf(spec, z); };
  InvariantMeasure m{MeasureKind::W, extract_coefficients(eval, N, radius),
                     w_gf(spec, 0.0)};
  m.validate();
  return m;
}

// The extraction radius trades the 1/r^j roundoff amplification at high
// orders against the growth of pi toward s = 1; for small |gamma| the
// growth is mild and a wide circle is safe.
inline InvariantMeasure build_pi_measure(const ProcessSpec& spec,
                                         std::size_t N, double radius = 0.7) {
  require_transient_balanced(spec);
  auto eval = [&](const std::complex<double>& z) { return pi_gf(spec, z); };
  InvariantMeasure m{MeasureKind::Pi, extract_coefficients(eval, N, radius),
                     pi_gf(spec, 0.0)};
  m.validate();
  return m;
}

struct InvarianceCheck {
  std::vector<double> residuals;  // r_j for j = 0..N/2
  double max_residual = 0.0;
  double truncation_bound = 0.0;
  // false when the truncation bound itself exceeds the requested tolerance
  bool conclusive = true;

  bool pass(double tol) const { return max_residual < truncation_bound + tol; }
};

// Residual of m_j = sum_i m_i p_ij(t), truncated at i <= N. The weighted
// row sum is a single coefficient extraction of P0(z) * sum_i m_i F(z)^i.
// The truncation bound is a doubling estimate: twice the change observed
// when the i-sum is extended from N to 2N terms, plus the aliasing bound.
// The measure must carry coefficients through order 2N.
inline InvarianceCheck check_invariance(const InvariantMeasure& measure,
                                        const ProcessSpec& spec, double t,
                                        std::size_t N, double tol = 1e-4) {
  if (measure.coeffs.order() < 2 * N)
    throw std::invalid_argument(
        "check_invariance: measure needs coefficients through order 2N");
  const double radius = measure.coeffs.radius;

  auto weighted_rows = [&](std::size_t top) {
    auto eval = [&](const std::complex<double>& z) {
      const std::complex<double> F =
          1.0 - solve_R<std::complex<double>>(spec, t, z);
      const std::complex<double> P0 = transition_gf(spec, 0, t, z);
      std::complex<double> acc = 0.0;
      for (std::size_t i = top + 1; i-- > 0;)
        acc = acc * F + measure.coeffs.coeffs[i];
      return acc * P0;
    };
    return extract_coefficients(eval, N, radius);
  };

  const SeriesCoefficients sum_n = weighted_rows(N);
  const SeriesCoefficients sum_2n = weighted_rows(2 * N);

  InvarianceCheck out;
  double tail = 0.0;
  double alias = 0.0;
  for (std::size_t j = 0; j <= N / 2; ++j) {
    out.residuals.push_back(sum_n.coeffs[j] - measure.coeffs.coeffs[j]);
    out.max_residual = std::max(out.max_residual, std::abs(out.residuals[j]));
    tail = std::max(tail, std::abs(sum_2n.coeffs[j] - sum_n.coeffs[j]));
    alias = std::max(alias, sum_2n.aliasing_bound(j));
  }
  out.truncation_bound = 2.0 * tail + alias;
  out.conclusive = out.truncation_bound <= tol;
  return out;
}

}  // namespace mbpi
