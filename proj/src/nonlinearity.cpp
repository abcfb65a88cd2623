#include "expheat/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "expheat/error.hpp"

namespace expheat {

namespace {

constexpr double kSeriesThreshold = 1e-2;
constexpr double kMaxExponent = 700.0;

// sum_{k>=2} (k-1) x^{k-2} / k!  and  sum_{k>=2} x^{k-2} / k!
std::pair<double, double> ratio_series(double x) {
  double num = 0.0;
  double den = 0.0;
  double term = 0.5;  // x^{k-2} / k! at k = 2
  for (int k = 2; k < 12; ++k) {
    num += (k - 1) * term;
    den += term;
    term *= x / (k + 1);
  }
  return {num, den};
}

}  // namespace

double expm1_minus_x(double x) {
  if (std::abs(x) < 0.5) {
    double term = 0.5 * x * x;
    double sum = 0.0;
    for (int k = 3; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
      sum += term;
      term *= x / k;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

void Nonlinearity::check(double u) const {
  if (!(std::abs(u) <= overflow_guard)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "overflow guard: |u| = %.6g exceeds %.6g", std::abs(u),
                  overflow_guard);
    throw OverflowGuardError(buf, u);
  }
}

double Nonlinearity::source(double u) const {
  check(u);
  const double x = u * u;
  switch (variant) {
    case Variant::Full:
      return sign_factor() * u * std::expm1(x);
    case Variant::PureExp:
      return sign_factor() * u * std::exp(x);
    case Variant::Zero:
      return 0.0;
  }
  return 0.0;
}

double Nonlinearity::primitive(double u) const {
  check(u);
  const double x = u * u;
  switch (variant) {
    case Variant::Full:
      return sign_factor() * 0.5 * expm1_minus_x(x);
    case Variant::PureExp:
      return sign_factor() * 0.5 * std::expm1(x);
    case Variant::Zero:
      return 0.0;
  }
  return 0.0;
}

double Nonlinearity::source_derivative(double u) const {
  check(u);
  const double x = u * u;
  switch (variant) {
    case Variant::Full:
      return sign_factor() * (std::expm1(x) + 2.0 * x * std::exp(x));
    case Variant::PureExp:
      return sign_factor() * std::exp(x) * (1.0 + 2.0 * x);
    case Variant::Zero:
      return 0.0;
  }
  return 0.0;
}

std::string to_string(Sign s) {
  return s == Sign::Focusing ? "focusing" : "defocusing";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Full:
      return "full";
    case Variant::PureExp:
      return "pure_exp";
    case Variant::Zero:
      return "zero";
  }
  return "?";
}

double superquadratic_ratio(double u, const Nonlinearity& nl) {
  if (u == 0.0) throw InvalidArgument("superquadratic_ratio: u must be != 0");
  if (nl.variant == Variant::Zero) {
    throw InvalidArgument("superquadratic_ratio: F vanishes identically");
  }
  nl.check(u);
  const double x = u * u;
  if (std::abs(u) < kSeriesThreshold) {
    const auto [num, den] = ratio_series(x);
    if (nl.variant == Variant::Full) return 2.0 * num / den;
    // PureExp: F = expm1(x)/2 = (x/2) (1 + x den).
    return 2.0 * x * num / (1.0 + x * den);
  }
  const double uf = u * nl.source(u);
  const double big_f = nl.primitive(u);
  return (uf - 2.0 * big_f) / big_f;
}

MarginReport superquadratic_margin(const Nonlinearity& nl,
                                   const MarginScan& scan) {
  if (nl.sign != Sign::Focusing) {
    throw InvalidArgument(
        "superquadratic_margin: defocusing F <= 0, the margin is undefined");
  }
  if (!(scan.u_min > 0.0) || !(scan.u_max > scan.u_min) || scan.samples < 2) {
    throw InvalidArgument("superquadratic_margin: bad scan specification");
  }
  const double u_max = std::min(scan.u_max, nl.overflow_guard);
  MarginReport report;
  report.inf_ratio = std::numeric_limits<double>::infinity();
  const double log_lo = std::log(scan.u_min);
  const double log_hi = std::log(u_max);
  for (std::size_t i = 0; i < scan.samples; ++i) {
    const double s = static_cast<double>(i) /
                     static_cast<double>(scan.samples - 1);
    const double u = std::exp(log_lo + s * (log_hi - log_lo));
    const double ratio = superquadratic_ratio(u, nl);
    if (ratio < report.inf_ratio) {
      report.inf_ratio = ratio;
      report.argmin = u;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "log-spaced |u| in [%.3g, %.3g], %zu samples",
                scan.u_min, u_max, scan.samples);
  report.sample_spec = buf;
  return report;
}

LipschitzReport lipschitz_estimate_check(
    std::span<const std::pair<double, double>> pairs, double eps,
    const Nonlinearity& nl) {
  if (!(eps > 0.0)) {
    throw InvalidArgument("lipschitz_estimate_check: eps must be positive");
  }
  LipschitzReport report;
  for (const auto& [u1, u2] : pairs) {
    if (u1 == u2) {
      throw InvalidArgument("lipschitz_estimate_check: degenerate pair U1 = U2");
    }
    nl.check(u1);
    nl.check(u2);
    const double g1 = (1.0 + eps) * u1 * u1;
    const double g2 = (1.0 + eps) * u2 * u2;
    if (2.0 * std::max(g1, g2) > kMaxExponent) {
      throw OverflowGuardError(
          "lipschitz_estimate_check: weight exponent too large",
          std::max(std::abs(u1), std::abs(u2)));
    }
    const double du = std::abs(u1 - u2);
    const double w_source = std::expm1(g1) + std::expm1(g2);
    const double w_deriv =
        std::sqrt(std::expm1(2.0 * g1)) + std::sqrt(std::expm1(2.0 * g2));
    const double r_source =
        std::abs(nl.source(u1) - nl.source(u2)) / (du * w_source);
    const double r_deriv =
        std::abs(nl.source_derivative(u1) - nl.source_derivative(u2)) /
        (du * w_deriv);
    report.max_ratio_source = std::max(report.max_ratio_source, r_source);
    report.max_ratio_derivative = std::max(report.max_ratio_derivative, r_deriv);
    ++report.pairs;
  }
  return report;
}

}  // namespace expheat
