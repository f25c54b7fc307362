#pragma once

// Slowly varying functions at infinity from a closed catalogue of three
// families, each with an analytically known remainder envelope for
// |L(lambda x)/L(x) - 1|.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mbpi {

enum class SvFamily { Constant, LogPower, WithRemainder };

struct SlowlyVaryingSpec {
  SvFamily family = SvFamily::Constant;
  double scale = 1.0;     // c > 0, common multiplier
  double log_exp = 0.0;   // p in c*(ln x)^p        (LogPower)
  double rem_decay = 0.0; // rho in c*(1 + d*x^-rho) (WithRemainder)
  double rem_amp = 0.0;   // d

  static SlowlyVaryingSpec constant(double c) {
    return {SvFamily::Constant, c, 0.0, 0.0, 0.0};
  }
  static SlowlyVaryingSpec log_power(double c, double p) {
    return {SvFamily::LogPower, c, p, 0.0, 0.0};
  }
  static SlowlyVaryingSpec with_remainder(double c, double rho, double d) {
    return {SvFamily::WithRemainder, c, 0.0, rho, d};
  }

  // Evaluation on the tail x >= 1. For LogPower the family formula
  // c*(ln x)^p applies for x >= e; on [1, e) the value is frozen at c so
  // the function stays positive everywhere it is defined.
  double operator()(double x) const {
    if (x < 1.0)
      throw std::domain_error("SlowlyVaryingSpec: x < 1");
    switch (family) {
      case SvFamily::Constant:
        return scale;
      case SvFamily::LogPower: {
        const double lx = std::max(std::log(x), 1.0);
        return scale * std::pow(lx, log_exp);
      }
      case SvFamily::WithRemainder:
        return scale * (1.0 + rem_amp * std::pow(x, -rem_decay));
    }
    return scale;
  }

  // Analytic continuation used by coefficient extraction; valid for
  // Re(z) > 0. LogPower uses the principal branch without the small-x
  // clamp, so it is only meaningful where Re(log z) > 0.
  std::complex<double> operator()(const std::complex<double>& z) const {
    switch (family) {
      case SvFamily::Constant:
        return {scale, 0.0};
      case SvFamily::LogPower:
        return scale * std::exp(log_exp * std::log(std::log(z)));
      case SvFamily::WithRemainder:
        return scale * (1.0 + rem_amp * std::pow(z, -rem_decay));
    }
    return {scale, 0.0};
  }

  // Envelope for |L(lambda x)/L(x) - 1| up to a bounded constant,
  // for lambda in a fixed compact set.
  double remainder_envelope(double x) const {
    if (x < 1.0)
      throw std::domain_error("SlowlyVaryingSpec: x < 1");
    switch (family) {
      case SvFamily::Constant:
        return 0.0;
      case SvFamily::LogPower:
        return std::abs(log_exp) / std::max(std::log(x), 1.0);
      case SvFamily::WithRemainder:
        return std::abs(rem_amp) * std::pow(x, -rem_decay);
    }
    return 0.0;
  }

  bool eventually_constant() const { return family != SvFamily::LogPower; }

  // Limit value L(inf) for the eventually-constant families.
  double limit_constant() const {
    if (!eventually_constant())
      throw std::logic_error("limit_constant: family has no finite limit");
    return scale;
  }

  std::string describe() const {
    switch (family) {
      case SvFamily::Constant:
        return "constant(" + std::to_string(scale) + ")";
      case SvFamily::LogPower:
        return "log_power(" + std::to_string(scale) + "," +
               std::to_string(log_exp) + ")";
      case SvFamily::WithRemainder:
        return "with_remainder(" + std::to_string(scale) + "," +
               std::to_string(rem_decay) + "," + std::to_string(rem_amp) + ")";
    }
    return "?";
  }
};

// Decreasing remainder bound attached to the basic assumptions:
// order_nu is O(L(x)/x^nu), order_delta is O(l(x)/x^delta).
struct RemainderForm {
  enum class Kind { OrderNu, OrderDelta } kind;
  double exponent;  // nu or delta
  SlowlyVaryingSpec sv;
  double scale = 1.0;

  double operator()(double x) const {
    return scale * sv(x) * std::pow(x, -exponent);
  }
};

}  // namespace mbpi
