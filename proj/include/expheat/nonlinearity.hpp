#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace expheat {

enum class Sign { Focusing, Defocusing };

enum class Variant {
  Full,     // u (e^{u^2} - 1)
  PureExp,  // u e^{u^2}
  Zero,     // f == 0, for linear-heat and harmonic checks
};

/// Default cap on |u| for evaluating e^{u^2}; e^{169} is far below DBL_MAX.
inline constexpr double kDefaultOverflowGuard = 13.0;

/// The source term f(u) = +/- u (e^{u^2} - 1) and its relatives.
///
/// All evaluations reject |u| > overflow_guard with OverflowGuardError
/// instead of returning infinities.
struct Nonlinearity {
  Sign sign = Sign::Focusing;
  Variant variant = Variant::Full;
  double overflow_guard = kDefaultOverflowGuard;

  static Nonlinearity focusing(Variant v = Variant::Full) {
    return {Sign::Focusing, v, kDefaultOverflowGuard};
  }
  static Nonlinearity defocusing(Variant v = Variant::Full) {
    return {Sign::Defocusing, v, kDefaultOverflowGuard};
  }
  static Nonlinearity zero() {
    return {Sign::Focusing, Variant::Zero, kDefaultOverflowGuard};
  }

  double source(double u) const;             // f(u)
  double primitive(double u) const;          // F(u), F(0) = 0
  double source_derivative(double u) const;  // f'(u)

  /// Throws OverflowGuardError when |u| > overflow_guard.
  void check(double u) const;

  double sign_factor() const { return sign == Sign::Focusing ? 1.0 : -1.0; }
};

std::string to_string(Sign s);
std::string to_string(Variant v);

/// e^x - 1 - x without cancellation for small x.
double expm1_minus_x(double x);

struct MarginScan {
  double u_min = 1e-4;
  double u_max = kDefaultOverflowGuard;
  std::size_t samples = 4000;  // log-spaced
};

struct MarginReport {
  double inf_ratio = 0.0;  // inf of (u f(u) - 2 F(u)) / F(u)
  double argmin = 0.0;
  std::string sample_spec;
};

/// (u f(u) - 2 F(u)) / F(u) at a single u != 0. Uses the power series
/// below |u| = 1e-2.
double superquadratic_ratio(double u, const Nonlinearity& nl);

/// Infimum of the superquadratic ratio over a log-spaced scan of |u|.
/// Rejects defocusing nonlinearities (F <= 0 there).
MarginReport superquadratic_margin(const Nonlinearity& nl,
                                   const MarginScan& scan = {});

struct LipschitzReport {
  double max_ratio_source = 0.0;      // |f(U1)-f(U2)| / (|dU| sum(e^{(1+e)U^2}-1))
  double max_ratio_derivative = 0.0;  // same for f' with sqrt(e^{2(1+e)U^2}-1)
  std::size_t pairs = 0;
};

/// Largest observed ratio of the difference estimates for f and f' over the
/// given pairs. A finite result is a candidate constant C_eps on the sample.
LipschitzReport lipschitz_estimate_check(
    std::span<const std::pair<double, double>> pairs, double eps,
    const Nonlinearity& nl);

}  // namespace expheat
