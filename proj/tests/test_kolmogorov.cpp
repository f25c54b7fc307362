#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "mbpi/kolmogorov.hpp"
#include "mbpi/series.hpp"

using namespace mbpi;

namespace {

// separable closed form for constant L == c:
//   R(t;s) = ((1-s)^-nu + c nu t)^(-1/nu)
double closed_R(double nu, double c, double t, double s) {
  return std::pow(std::pow(1.0 - s, -nu) + c * nu * t, -1.0 / nu);
}

ProcessSpec constants_spec(double nu, double delta) {
  return {nu, delta, SlowlyVaryingSpec::constant(1.0),
          SlowlyVaryingSpec::constant(1.0)};
}

}  // namespace

TEST_CASE("flow identity at t = 0") {
  const auto spec = constants_spec(0.5, 0.5);
  const FlowPoint fp = solve_F(spec, 0.0, 0.3);
  CHECK(fp.F == 0.3);
  CHECK(fp.F + fp.R == 1.0);
}

TEST_CASE("flow matches the separable closed form") {
  const auto spec = constants_spec(0.5, 0.5);
  // R(6;0) = (1 + 3)^-2 = 1/16
  CHECK_THAT(solve_F(spec, 6.0, 0.0).R,
             Catch::Matchers::WithinAbs(1.0 / 16.0, 1e-10));

  const auto spec3 = constants_spec(0.3, 0.8);
  const double expect = closed_R(0.3, 1.0, 10.0, 0.5);
  CHECK_THAT(solve_F(spec3, 10.0, 0.5).R,
             Catch::Matchers::WithinAbs(expect, 1e-10));

  for (double nu : {0.3, 0.5, 0.7}) {
    const auto sp = constants_spec(nu, 0.5);
    for (double t : {0.1, 1.0, 10.0, 100.0, 1e4})
      for (double s : {0.0, 0.25, 0.5, 0.75, 0.9})
        CHECK_THAT(solve_F(sp, t, s).F,
                   Catch::Matchers::WithinAbs(1.0 - closed_R(nu, 1.0, t, s),
                                              1e-8));
  }
}

TEST_CASE("flow semigroup property") {
  const ProcessSpec spec{0.4, 0.5,
                         SlowlyVaryingSpec::with_remainder(1.0, 0.5, 0.3),
                         SlowlyVaryingSpec::constant(1.0)};
  for (double t : {0.5, 2.0, 20.0})
    for (double tau : {0.1, 1.0, 10.0})
      for (double s : {0.0, 0.5, 0.9}) {
        const double direct = solve_F(spec, t + tau, s).F;
        const double nested = solve_F(spec, t, solve_F(spec, tau, s).F).F;
        CHECK_THAT(direct, Catch::Matchers::WithinAbs(nested, 1e-8));
      }
}

TEST_CASE("flow monotonicity") {
  const auto spec = constants_spec(0.6, 0.4);
  double prev_R = 1e300, prev_tau = 0.0;
  for (double t : {0.5, 1.0, 5.0, 25.0, 125.0}) {
    const double R = solve_F(spec, t, 0.3).R;
    CHECK(R < prev_R);
    prev_R = R;
    const double tau = norming(spec, t, 0.0).tau;
    CHECK(tau > prev_tau);
    prev_tau = tau;
  }
}

TEST_CASE("norming functions") {
  const auto spec = constants_spec(0.5, 0.5);
  CHECK_THAT(norming(spec, 6.0, 0.0).tau,
             Catch::Matchers::WithinAbs(16.0, 1e-8));
  // M(t;0) = 0 identically
  for (double t : {0.1, 1.0, 100.0})
    CHECK(norming(spec, t, 0.0).M == 0.0);
  // calN(t) -> 1 for L == 1
  CHECK_THAT(norming(spec, 1e6, 0.0).calN,
             Catch::Matchers::WithinAbs(1.0, 1e-4));

  // reconstruction of R from the norming identity
  for (double t : {1.0, 10.0})
    for (double s : {0.0, 0.4, 0.8}) {
      const auto n = norming(spec, t, s);
      const double lhs = solve_F(spec, t, s).R;
      const double rhs = n.calN / std::pow(spec.nu * t, 1.0 / spec.nu) *
                         (1.0 - n.M / (spec.nu * t));
      CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-12 + 1e-8 * lhs));
    }
}

TEST_CASE("norming scaling limit of calN") {
  // N^nu(t) L(tau(t)) -> 1
  const ProcessSpec spec{0.4, 0.5,
                         SlowlyVaryingSpec::with_remainder(1.0, 0.5, 0.4),
                         SlowlyVaryingSpec::constant(1.0)};
  double prev = 1e300;
  for (double t : {1e2, 1e4, 1e6}) {
    const auto n = norming(spec, t, 0.0);
    const double dev =
        std::abs(std::pow(n.calN, spec.nu) * spec.L(n.tau) - 1.0);
    CHECK(dev < prev + 1e-12);
    prev = dev;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("invariant-measure GF of the plain process") {
  const auto spec = constants_spec(0.5, 0.5);
  CHECK(calM(spec, 0.0) == 0.0);
  // ((1-s)^-nu - 1)/nu at nu = 0.5, s = 0.75
  CHECK_THAT(calM(spec, 0.75), Catch::Matchers::WithinAbs(2.0, 1e-9));
  // Lemma 1 convergence M(t;s) -> calM(s)
  for (double s : {0.3, 0.75})
    CHECK_THAT(norming(spec, 1e4, s).M / calM(spec, s),
               Catch::Matchers::WithinAbs(1.0, 1e-2));
}

TEST_CASE("transition GF closed family") {
  const auto spec = constants_spec(0.3, 0.8);  // gamma = 0.5
  CHECK(transition_gf(spec, 0, 0.0, 0.37) == 1.0);

  auto closed_p00 = [&](double t) {
    return std::exp(-2.0 * (1.0 - std::pow(1.0 + 0.3 * t, -0.5 / 0.3)));
  };
  for (double t : {0.5, 2.0, 10.0, 100.0})
    CHECK_THAT(transition_gf(spec, 0, t, 0.0),
               Catch::Matchers::WithinAbs(closed_p00(t), 1e-10));
  // limit e^-2
  CHECK_THAT(transition_gf(spec, 0, 1e6, 0.0),
             Catch::Matchers::WithinAbs(std::exp(-2.0), 1e-5));
}

TEST_CASE("transition GF conservation and factorization") {
  const auto spec = constants_spec(0.3, 0.8);
  double prev = 0.0;
  for (double s : {0.0, 0.5, 0.9, 0.99, 0.9999}) {
    const double p = transition_gf(spec, 0, 1.0, s);
    CHECK(p > prev);
    CHECK(p <= 1.0);
    prev = p;
  }
  CHECK(prev > 0.99);  // proper distribution: P -> 1 as s -> 1

  const double F = solve_F(spec, 1.0, 0.4).F;
  CHECK_THAT(transition_gf(spec, 3, 1.0, 0.4),
             Catch::Matchers::WithinAbs(
                 F * F * F * transition_gf(spec, 0, 1.0, 0.4), 1e-12));
}

TEST_CASE("space-form and time-form exponents agree") {
  const ProcessSpec spec{0.45, 0.6,
                         SlowlyVaryingSpec::with_remainder(1.0, 0.5, 0.2),
                         SlowlyVaryingSpec::with_remainder(1.0, 0.4, 0.1)};
  for (double t : {0.3, 1.0, 5.0})
    for (double s : {0.0, 0.5}) {
      const double a = transition_gf(spec, 2, t, s);
      const double b = transition_gf_time_form(spec, 2, t, s);
      CHECK_THAT(a, Catch::Matchers::WithinAbs(b, 1e-8));
    }
}

TEST_CASE("coefficient extraction: monomial") {
  auto eval = [](const std::complex<double>& z) { return z * z; };
  const SeriesCoefficients c = extract_coefficients(eval, 4, 0.5);
  for (std::size_t j = 0; j <= 4; ++j)
    CHECK_THAT(c.coeffs[j],
               Catch::Matchers::WithinAbs(j == 2 ? 1.0 : 0.0, 1e-12));
}

TEST_CASE("coefficient extraction: binomial oracle") {
  const auto spec = constants_spec(0.5, 0.5);
  auto eval = [&](const std::complex<double>& z) { return f_eval(spec, z); };
  const SeriesCoefficients c = extract_coefficients(eval, 3);
  CHECK_THAT(c.coeffs[0], Catch::Matchers::WithinAbs(1.0, 1e-10));
  CHECK_THAT(c.coeffs[1], Catch::Matchers::WithinAbs(-1.5, 1e-10));
  CHECK_THAT(c.coeffs[2], Catch::Matchers::WithinAbs(0.375, 1e-10));
  CHECK_THAT(c.coeffs[3], Catch::Matchers::WithinAbs(0.0625, 1e-10));
}

TEST_CASE("coefficient extraction: transition probabilities") {
  const auto spec = constants_spec(0.3, 0.8);
  auto eval = [&](const std::complex<double>& z) {
    return transition_gf(spec, 0, 1.0, z);
  };
  const SeriesCoefficients c = extract_coefficients(eval, 16);
  double sum = 0.0;
  for (double x : c.coeffs) {
    CHECK(x >= -1e-10);
    sum += x;
  }
  CHECK(sum <= 1.0 + 1e-10);
  // p_00(1) matches the real-axis route
  CHECK_THAT(c.coeffs[0],
             Catch::Matchers::WithinAbs(transition_gf(spec, 0, 1.0, 0.0),
                                        1e-9));
}

TEST_CASE("extraction rejects a failing evaluator") {
  auto eval = [](const std::complex<double>&) {
    return std::complex<double>(std::nan(""), 0.0);
  };
  CHECK_THROWS_AS(extract_coefficients(eval, 4), ExtractionError);
}
