#pragma once

// Truncated intensity tables {a_j}, {b_j} recovered from the closed
// tail forms of f and g. Constant and with_remainder families expand
// exactly through generalized binomial series; log_power falls back to
// numerical coefficient extraction.

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbpi/process.hpp"
#include "mbpi/series.hpp"

namespace mbpi {

struct IntensityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntensityTable {
  std::vector<double> a;  // offspring intensities, 0..J
  std::vector<double> b;  // immigration intensities, 0..J
  std::size_t J = 0;
  double tail_mass_a = 0.0;
  double tail_mass_b = 0.0;

  double total_transform_rate() const { return -a[1]; }    // -a_1
  double total_immigration_rate() const { return -b[0]; }  // -b_0

  void validate(double tol = 1e-9) const {
    if (a.size() != J + 1 || b.size() != J + 1)
      throw IntensityError("IntensityTable: size mismatch");
    if (!(a[0] > 0.0)) throw IntensityError("IntensityTable: a_0 must be positive");
    if (!(a[1] < 0.0)) throw IntensityError("IntensityTable: a_1 must be negative");
    if (!(b[0] < 0.0)) throw IntensityError("IntensityTable: b_0 must be negative");
    double sum_a = 0.0, sum_b = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
      if (j != 1 && a[j] < 0.0)
        throw IntensityError("IntensityTable: negative a at index " +
                             std::to_string(j));
      if (j >= 1 && b[j] < 0.0)
        throw IntensityError("IntensityTable: negative b at index " +
                             std::to_string(j));
      if (j != 1) sum_a += a[j];
      if (j >= 1) sum_b += b[j];
    }
    if (std::abs(sum_a + tail_mass_a + a[1]) > tol)
      throw IntensityError("IntensityTable: offspring mass balance violated");
    if (std::abs(sum_b + tail_mass_b + b[0]) > tol)
      throw IntensityError("IntensityTable: immigration mass balance violated");
  }

  // columnar text dump: index, a_j, b_j
  void write_csv(std::ostream& os) const {
    os << "j,a,b\n";
    for (std::size_t j = 0; j <= J; ++j)
      os << j << ',' << a[j] << ',' << b[j] << '\n';
  }
};

namespace detail {

// coefficients of (1-s)^alpha up to order J:  (-1)^j C(alpha, j)
inline std::vector<double> binomial_series(double alpha, std::size_t J) {
  std::vector<double> c(J + 1);
  c[0] = 1.0;
  for (std::size_t j = 0; j < J; ++j)
    c[j + 1] = -c[j] * (alpha - static_cast<double>(j)) /
               (static_cast<double>(j) + 1.0);
  return c;
}

inline void clamp_roundoff(std::vector<double>& v, std::size_t skip) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j == skip) continue;
    if (v[j] < 0.0 && v[j] > -1e-14) v[j] = 0.0;
  }
}

}  // namespace detail

inline IntensityTable build_intensities(const ProcessSpec& spec,
                                        std::size_t J) {
  spec.validate();
  if (J < 2) throw std::invalid_argument("build_intensities: J must be >= 2");

  IntensityTable table;
  table.J = J;

  auto expand = [&](const SlowlyVaryingSpec& sv, double power,
                    bool negate) -> std::vector<double> {
    std::vector<double> c;
    switch (sv.family) {
      case SvFamily::Constant:
        c = detail::binomial_series(power, J);
        for (double& x : c) x *= sv.scale;
        break;
      case SvFamily::WithRemainder: {
        // c0*(1-s)^p + c0*d*(1-s)^(p+rho), both exact binomials
        c = detail::binomial_series(power, J);
        const std::vector<double> c2 =
            detail::binomial_series(power + sv.rem_decay, J);
        for (std::size_t j = 0; j <= J; ++j)
          c[j] = sv.scale * (c[j] + sv.rem_amp * c2[j]);
        break;
      }
      case SvFamily::LogPower: {
        auto eval = [&](const std::complex<double>& s) {
          const std::complex<double> r = 1.0 - s;
          return std::pow(r, power) * sv(1.0 / r);
        };
        c = extract_coefficients(eval, J, 0.7).coeffs;
        break;
      }
    }
    if (negate)
      for (double& x : c) x = -x;
    return c;
  };

  table.a = expand(spec.L, 1.0 + spec.nu, false);
  table.b = expand(spec.ell, spec.delta, true);
  detail::clamp_roundoff(table.a, 1);
  detail::clamp_roundoff(table.b, 0);

  // f(1) = 0 and g(1) = 0 pin the discarded tail mass
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t j = 0; j <= J; ++j) {
    if (j != 1) sum_a += table.a[j];
    if (j >= 1) sum_b += table.b[j];
  }
  table.tail_mass_a = -table.a[1] - sum_a;
  table.tail_mass_b = -table.b[0] - sum_b;

  table.validate();
  return table;
}

// One-sided estimate of f'(1-), extrapolated from s = 1 - 10^-k. Criticality
// means the limit is 0: f(s)/(1-s) = (1-s)^nu L(1/(1-s)) -> 0.
inline double criticality_defect(const ProcessSpec& spec, int k_min = 4,
                                 int k_max = 8) {
  double prev = std::abs(f_eval(spec, 1.0 - std::pow(10.0, -k_min)) /
                         std::pow(10.0, -k_min));
  for (int k = k_min + 1; k <= k_max; ++k) {
    const double h = std::pow(10.0, -k);
    const double cur = std::abs(f_eval(spec, 1.0 - h) / h);
    if (cur > prev)
      throw IntensityError("criticality_defect: one-sided slope not decreasing");
    prev = cur;
  }
  return prev;
}

}  // namespace mbpi
