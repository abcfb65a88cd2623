#pragma once

// Radial stationary solutions of -Delta u = f(u) on the unit disc through the
// substitution r = e^{-t}, u(r) = y(t), which turns the radial equation into
//
//   -y''(t) = e^{-2t} f(y(t)),   y(0) = 0,  y'(0) = alpha.
//
// A trajectory either crosses zero at some T(alpha) or stays positive up to
// the horizon. Non-crossing trajectories give profiles with u(1) = 0; the
// bounded one is the classical solution, the others grow without bound as
// r -> 0.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expheat/nonlinearity.hpp"
#include "expheat/radial.hpp"

namespace expheat {

enum class Classification { Crossing, NoCrossingByTmax, Overflow };

std::string to_string(Classification c);

struct ShootingTrajectory {
  double alpha = 0.0;
  double t_max = 0.0;
  double tol = 0.0;
  std::vector<double> t_samples;
  std::vector<double> y_samples;
  std::vector<double> ydot_samples;
  Classification classification = Classification::NoCrossingByTmax;
  std::optional<double> crossing_time;
  // State at t_max, at the crossing, or the last valid state on overflow.
  double y_end = 0.0;
  double ydot_end = 0.0;
  // First time with y > 0 and y' = 0. Past it y is concave and decreasing,
  // so a later crossing is certain even if it lies beyond t_max.
  std::optional<double> turning_time;

  bool certain_to_cross() const {
    return classification == Classification::Crossing ||
           turning_time.has_value();
  }
};

/// Dormand-Prince 5(4) with dense output (Boost.Odeint), absolute and
/// relative tolerance tol. Zero crossings and turning points are located by
/// bisection on the dense output. Overflow is declared when the forcing
/// e^{-2t} f(y) would leave double range (y^2 - 2t > 700).
/// Accepts focusing nonlinearities; Variant::Zero gives y = alpha t.
ShootingTrajectory integrate_trajectory(double alpha, double t_max, double tol,
                                        const Nonlinearity& nl);

struct ScanRow {
  double alpha = 0.0;
  Classification classification = Classification::NoCrossingByTmax;
  std::optional<double> crossing_time;
  // Crossed, or turned while positive. Boundary brackets use this flag.
  bool certain_to_cross = false;
  double y_end = 0.0;
  double ydot_end = 0.0;
  std::string error;  // non-empty when the integration threw
};

struct ScanTable {
  std::vector<ScanRow> rows;
  // Maximal runs of consecutive NoCrossingByTmax rows, as [first, last] alpha.
  std::vector<std::pair<double, double>> windows;
};

/// Requires strictly increasing alphas. Per-entry failures are recorded in
/// the row and the scan continues.
ScanTable scan_alpha(std::span<const double> alphas, double t_max, double tol,
                     const Nonlinearity& nl);

/// Bisection to width 1e-6 between a slope whose trajectory is certain to
/// cross and one that is not; returns the midpoint. Throws BracketError when
/// the two classify alike or arrive in the opposite roles.
double bisect_boundary(double crossing_alpha, double noncrossing_alpha,
                       double t_max, double tol, const Nonlinearity& nl);

struct SingularProfile {
  RadialField field;
  double alpha = 0.0;
  double cap = 0.0;  // value stored at r = 0, equal to y(t_max)
  std::shared_ptr<const ShootingTrajectory> trajectory;
};

/// Monotone cubic Hermite interpolation of (t, y, y') at t = -ln r_i; the
/// r = 0 node carries y(t_max). Requires a UnitDisc grid, a trajectory
/// without crossing or overflow, and r_1 >= e^{-t_max}.
SingularProfile to_profile(const ShootingTrajectory& traj, GridPtr grid);

/// max |Delta_h u + f(u)| over interior nodes with r_lo <= r <= r_hi.
double stationarity_residual(const RadialField& u, const Nonlinearity& nl,
                             double r_lo, double r_hi);

struct BvpResult {
  RadialField field;
  std::size_t iterations = 0;
  double residual = 0.0;  // max_i |Delta_h u + f(u)|_i / (1 + |L_ii|)
  double raw_residual = 0.0;
  bool damping_engaged = false;
  std::size_t continuation_steps = 0;
};

/// Damped Newton on Delta_h u + f(u) = 0 with u(1) = 0.
///
/// The solution is a narrow peak, so Newton started directly from
/// init_amplitude (1 - r^2) wanders off. The guess is first carried along
/// the family L u + lambda f(u) = 0, u(0) = c, with c starting at
/// init_amplitude, until lambda = 1 is bracketed; Newton at lambda = 1 then
/// finishes. Converged when the diagonally scaled residual is at most tol.
/// Throws ConvergenceError when continuation stalls or after max_iterations.
BvpResult solve_regular_bvp(GridPtr grid, const Nonlinearity& nl,
                            double init_amplitude = 1.0, double tol = 1e-10,
                            std::size_t max_iterations = 100);

struct LocalizationRow {
  double radius = 0.0;
  double norm = 0.0;
};

struct SingularValidation {
  double f_l1_n = 0.0;
  double f_l1_2n = 0.0;
  double f_l1_gap = 0.0;  // relative
  std::vector<LocalizationRow> localization;
  bool strictly_decreasing = false;
  bool last_below = false;  // final entry < 0.1
};

inline constexpr double kLocalizationRadii[] = {0.5, 0.2, 0.1, 0.05, 0.02};

/// int_{B_1} f(Q) on the profile's grid and on a grid with twice the
/// intervals regenerated from the same trajectory, both omitting the r = 0
/// cap node, plus Luxemburg norms on |x| < r.
SingularValidation validate_singular(const SingularProfile& q,
                                     const Nonlinearity& nl,
                                     std::span<const double> radii =
                                         kLocalizationRadii);

}  // namespace expheat
