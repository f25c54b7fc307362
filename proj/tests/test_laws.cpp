#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mbpi/intensities.hpp"
#include "mbpi/process.hpp"

using namespace mbpi;

namespace {

ProcessSpec constants_spec(double nu, double delta, double cL = 1.0,
                           double cl = 1.0) {
  return {nu, delta, SlowlyVaryingSpec::constant(cL),
          SlowlyVaryingSpec::constant(cl)};
}

}  // namespace

TEST_CASE("f evaluation") {
  const auto spec = constants_spec(0.5, 0.5);
  CHECK(f_eval(spec, 0.0) == 1.0);
  CHECK_THAT(f_eval(spec, 0.75), Catch::Matchers::WithinAbs(0.125, 1e-14));
  CHECK(f_eval({0.3, 0.5}, 1.0 - 1e-12) < 1e-8);
  CHECK_THROWS_AS(f_eval(spec, 1.0), std::domain_error);
}

TEST_CASE("g evaluation") {
  const auto spec = constants_spec(0.5, 0.5);
  CHECK(g_eval(spec, 0.0) == -1.0);
  CHECK_THAT(g_eval(spec, 0.75), Catch::Matchers::WithinAbs(-0.5, 1e-14));
  CHECK(g_eval(spec, 1.0) == 0.0);
  for (double s = 0.0; s < 1.0; s += 0.083) CHECK(g_eval(spec, s) <= 0.0);
}

TEST_CASE("process spec derived quantities") {
  const auto spec = constants_spec(0.3, 0.8, 2.0, 0.5);
  CHECK_THAT(spec.gamma(), Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK(spec.ratio_limit_exists());
  CHECK_THAT(spec.ratio_limit(), Catch::Matchers::WithinAbs(0.25, 1e-15));
  CHECK_THROWS_AS(ProcessSpec({1.2, 0.5}).validate(), std::invalid_argument);
}

TEST_CASE("binomial intensity tables") {
  const auto spec = constants_spec(0.5, 0.5);
  const IntensityTable t = build_intensities(spec, 3);
  // (1-s)^1.5 = 1 - 1.5 s + 0.375 s^2 + 0.0625 s^3 + ...
  CHECK_THAT(t.a[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(t.a[1], Catch::Matchers::WithinAbs(-1.5, 1e-14));
  CHECK_THAT(t.a[2], Catch::Matchers::WithinAbs(0.375, 1e-14));
  CHECK_THAT(t.a[3], Catch::Matchers::WithinAbs(0.0625, 1e-14));
  // -(1-s)^0.5 = -1 + 0.5 s + 0.125 s^2 + ...
  CHECK_THAT(t.b[0], Catch::Matchers::WithinAbs(-1.0, 1e-14));
  CHECK_THAT(t.b[1], Catch::Matchers::WithinAbs(0.5, 1e-14));
  CHECK_THAT(t.b[2], Catch::Matchers::WithinAbs(0.125, 1e-14));
  CHECK_THROWS_AS(build_intensities(spec, 1), std::invalid_argument);
}

TEST_CASE("mass balance pins the tail") {
  for (double nu : {0.2, 0.5, 0.8})
    for (double delta : {0.3, 0.7}) {
      const IntensityTable t = build_intensities(constants_spec(nu, delta), 256);
      double sum_a = t.tail_mass_a, sum_b = t.tail_mass_b;
      for (std::size_t j = 0; j <= t.J; ++j) {
        sum_a += t.a[j];
        sum_b += t.b[j];
      }
      CHECK(std::abs(sum_a) < 1e-12);  // f(1) = 0
      CHECK(std::abs(sum_b) < 1e-12);  // g(1) = 0
      CHECK(t.tail_mass_a > 0.0);
      CHECK(t.tail_mass_b > 0.0);
    }
}

TEST_CASE("coefficient sign pattern across the parameter range") {
  for (double nu = 0.1; nu < 1.0; nu += 0.2)
    for (double delta = 0.1; delta < 1.0; delta += 0.2) {
      const IntensityTable t =
          build_intensities(constants_spec(nu, delta), 128);
      CHECK_NOTHROW(t.validate());
    }
}

TEST_CASE("series from the table reproduces f") {
  const auto spec = constants_spec(0.5, 0.5);
  const IntensityTable t = build_intensities(spec, 1 << 12);
  for (double s = 0.0; s <= 0.9; s += 0.15) {
    double acc = 0.0;
    for (std::size_t j = t.J + 1; j-- > 0;) acc = acc * s + t.a[j];
    const double bound =
        t.tail_mass_a * std::pow(s, static_cast<double>(t.J) + 1.0) /
            (1.0 - s) +
        1e-12;
    CHECK(std::abs(acc - f_eval(spec, s)) <= bound);
  }
}

TEST_CASE("offspring tail decays like j^-(2+nu)") {
  const auto spec = constants_spec(0.4, 0.5);
  const IntensityTable t = build_intensities(spec, 1 << 12);
  double lo = 1e300, hi = 0.0;
  for (std::size_t j = t.J / 2; j <= t.J; ++j) {
    const double r = t.a[j] * std::pow(static_cast<double>(j), 2.0 + spec.nu);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 1.01);  // ratio flattens to a positive constant
}

TEST_CASE("with_remainder tables expand exactly") {
  const ProcessSpec spec{0.5, 0.5,
                         SlowlyVaryingSpec::with_remainder(1.0, 0.5, 0.5),
                         SlowlyVaryingSpec::constant(1.0)};
  const IntensityTable t = build_intensities(spec, 64);
  // f(s) = (1-s)^1.5 + 0.5 (1-s)^2; check a few coefficients by hand
  CHECK_THAT(t.a[0], Catch::Matchers::WithinAbs(1.5, 1e-14));
  CHECK_THAT(t.a[1], Catch::Matchers::WithinAbs(-2.5, 1e-14));
  CHECK_THAT(t.a[2], Catch::Matchers::WithinAbs(0.375 + 0.5, 1e-14));
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("criticality holds numerically") {
  CHECK(criticality_defect(constants_spec(0.3, 0.8)) < 1e-2);
  CHECK(criticality_defect({0.5, 0.5,
                            SlowlyVaryingSpec::with_remainder(1.0, 0.5, 0.3),
                            SlowlyVaryingSpec::constant(1.0)}) < 1e-2);
}
