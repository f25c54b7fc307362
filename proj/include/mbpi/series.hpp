#pragma once

// Power-series coefficient extraction by circle sampling: for an
// analytic evaluator with real coefficients,
//   c_j = (1/M) sum_k eval(r w^k) w^{-jk} / r^j,   w = exp(2 pi i / M).
// Conjugate symmetry halves the evaluator calls.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mbpi {

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeriesCoefficients {
  std::vector<double> coeffs;  // indices 0..N
  std::size_t order() const { return coeffs.size() - 1; }
  double radius = 0.7;
  std::size_t samples = 0;
  double sup_abs = 0.0;  // max |eval| over the sample circle

  // aliasing contribution to coefficient j: sup|eval| r^(M-j) / (1 - r^M)
  double aliasing_bound(std::size_t j) const {
    const double rM = std::pow(radius, static_cast<double>(samples));
    return sup_abs *
           std::pow(radius, static_cast<double>(samples) -
                                static_cast<double>(j)) /
           (1.0 - rM);
  }

  double eval(double s) const {
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * s + coeffs[j];
    return acc;
  }

  double partial_sum() const {
    double acc = 0.0;
    for (double c : coeffs) acc += c;
    return acc;
  }
};

// eval must map complex s with |s| = radius to complex values; N+1
// coefficients are returned, sampled at M = oversample*N points (>= 2N).
template <class F>
SeriesCoefficients extract_coefficients(F&& eval, std::size_t N,
                                        double radius = 0.7,
                                        std::size_t oversample = 4) {
  if (N == 0) throw std::invalid_argument("extract_coefficients: N == 0");
  if (!(radius > 0.0 && radius < 1.0))
    throw std::invalid_argument("extract_coefficients: radius outside (0,1)");
  // floor of 128 samples keeps the aliasing term below ~1e-10 at the
  // default radius even for small N
  const std::size_t M =
      std::max<std::size_t>({oversample * N, 2 * N, 128});

  std::vector<std::complex<double>> samples(M);
  double sup_abs = 0.0;
  for (std::size_t k = 0; k <= M / 2; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(M);
    const std::complex<double> z = std::polar(radius, theta);
    std::complex<double> v = eval(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ExtractionError("extract_coefficients: evaluator returned non-finite sample");
    samples[k] = v;
    if (k != 0 && k != M / 2) samples[M - k] = std::conj(v);
    sup_abs = std::max(sup_abs, std::abs(v));
  }

  SeriesCoefficients out;
  out.coeffs.resize(N + 1);
  out.radius = radius;
  out.samples = M;
  out.sup_abs = sup_abs;
  for (std::size_t j = 0; j <= N; ++j) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      const double theta = -2.0 * std::numbers::pi *
                           static_cast<double>(j * k % M) /
                           static_cast<double>(M);
      acc += samples[k] * std::polar(1.0, theta);
    }
    out.coeffs[j] = acc.real() / static_cast<double>(M) /
                    std::pow(radius, static_cast<double>(j));
  }
  return out;
}

}  // namespace mbpi
