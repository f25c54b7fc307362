#pragma once

// Embedded Dormand-Prince 5(4) integrator with PI step control.
// State is a fixed-size array of doubles or complex doubles.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mbpi {

struct OdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double scalar_abs(double x) { return std::abs(x); }
inline double scalar_abs(const std::complex<double>& z) { return std::abs(z); }

}  // namespace detail

template <class Scalar, std::size_t N, class Deriv>
std::array<Scalar, N> integrate_ode(Deriv&& deriv, std::array<Scalar, N> y,
                                    double t0, double t1, double rel_tol = 1e-10,
                                    double abs_tol = 1e-300) {
  using State = std::array<Scalar, N>;
  if (t1 == t0) return y;
  if (t1 < t0) throw std::invalid_argument("integrate_ode: t1 < t0");

  // Dormand-Prince coefficients
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                   e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640,
                   e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  auto axpy = [](State& out, double a, const State& x) {
    for (std::size_t i = 0; i < N; ++i) out[i] += a * x[i];
  };

  double t = t0;
  double h = (t1 - t0) * 1e-3;
  State k1 = deriv(t, y);
  double prev_err = 1.0;
  std::size_t steps = 0;
  const std::size_t max_steps = 2000000;

  while (t < t1) {
    if (++steps > max_steps)
      throw OdeError("integrate_ode: step budget exhausted");
    h = std::min(h, t1 - t);

    State y2 = y; axpy(y2, h * a21, k1);
    State k2 = deriv(t + c2 * h, y2);
    State y3 = y; axpy(y3, h * a31, k1); axpy(y3, h * a32, k2);
    State k3 = deriv(t + c3 * h, y3);
    State y4 = y; axpy(y4, h * a41, k1); axpy(y4, h * a42, k2);
    axpy(y4, h * a43, k3);
    State k4 = deriv(t + c4 * h, y4);
    State y5 = y; axpy(y5, h * a51, k1); axpy(y5, h * a52, k2);
    axpy(y5, h * a53, k3); axpy(y5, h * a54, k4);
    State k5 = deriv(t + c5 * h, y5);
    State y6 = y; axpy(y6, h * a61, k1); axpy(y6, h * a62, k2);
    axpy(y6, h * a63, k3); axpy(y6, h * a64, k4); axpy(y6, h * a65, k5);
    State k6 = deriv(t + h, y6);
    State y7 = y; axpy(y7, h * b1, k1); axpy(y7, h * b3, k3);
    axpy(y7, h * b4, k4); axpy(y7, h * b5, k5); axpy(y7, h * b6, k6);
    State k7 = deriv(t + h, y7);

    // scaled error estimate
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = detail::scalar_abs(
          Scalar(h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i])));
      const double scale =
          abs_tol + rel_tol * std::max(detail::scalar_abs(y[i]),
                                       detail::scalar_abs(y7[i]));
      err = std::max(err, ei / std::max(scale, 1e-300));
    }

    if (err <= 1.0) {
      t += h;
      y = y7;
      k1 = k7;  // FSAL
      const double fac =
          0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
          std::pow(prev_err, 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 5.0);
      prev_err = std::max(err, 1e-10);
    } else {
      h *= std::max(0.9 * std::pow(err, -1.0 / 5.0), 0.2);
      if (!(h > 0.0) || t + h == t)
        throw OdeError("integrate_ode: step size underflow");
    }
  }
  return y;
}

template <class Scalar, class Deriv>
Scalar integrate_ode_scalar(Deriv&& deriv, Scalar y0, double t0, double t1,
                            double rel_tol = 1e-10, double abs_tol = 1e-300) {
  auto d = [&](double t, const std::array<Scalar, 1>& y) {
    return std::array<Scalar, 1>{deriv(t, y[0])};
  };
  return integrate_ode<Scalar, 1>(d, std::array<Scalar, 1>{y0}, t0, t1,
                                  rel_tol, abs_tol)[0];
}

}  // namespace mbpi
