#include "expheat/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "expheat/error.hpp"
#include "expheat/orlicz.hpp"
#include "expheat/tridiagonal.hpp"

namespace expheat {

namespace {

using State = std::array<double, 2>;

constexpr double kForcingExpLimit = 700.0;

struct ForcingOverflow {};

// e^{-2t} f(y), arranged so that neither factor overflows on its own.
double forcing(double y, double t, const Nonlinearity& nl) {
  if (nl.variant == Variant::Zero) return 0.0;
  const double y2 = y * y;
  if (y2 - 2.0 * t > kForcingExpLimit) throw ForcingOverflow{};
  if (nl.variant == Variant::PureExp) return y * std::exp(y2 - 2.0 * t);
  if (y2 < 1.0) return y * std::expm1(y2) * std::exp(-2.0 * t);
  return y * (std::exp(y2 - 2.0 * t) - std::exp(-2.0 * t));
}

template <class Stepper, class Pred>
double bisect_event(const Stepper& stepper, double a, double b, Pred past) {
  State x;
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, b); ++it) {
    const double m = 0.5 * (a + b);
    stepper.calc_state(m, x);
    if (past(x)) {
      b = m;
    } else {
      a = m;
    }
  }
  return 0.5 * (a + b);
}

// Cubic Hermite on one interval with the Fritsch-Carlson limiter.
double hermite(double t, double t0, double t1, double y0, double y1, double m0,
               double m1) {
  const double h = t1 - t0;
  const double delta = (y1 - y0) / h;
  if (delta == 0.0) {
    m0 = 0.0;
    m1 = 0.0;
  } else {
    double a = std::max(m0 / delta, 0.0);
    double b = std::max(m1 / delta, 0.0);
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      a *= tau;
      b *= tau;
    }
    m0 = a * delta;
    m1 = b * delta;
  }
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

double interpolate(const ShootingTrajectory& tr, double t) {
  const auto& ts = tr.t_samples;
  if (t <= ts.front()) return tr.y_samples.front();
  if (t >= ts.back()) return tr.y_samples.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - ts.begin()) - 1;
  return hermite(t, ts[k], ts[k + 1], tr.y_samples[k], tr.y_samples[k + 1],
                 tr.ydot_samples[k], tr.ydot_samples[k + 1]);
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double f_l1_skip_origin(const RadialField& q, const Nonlinearity& nl) {
  const auto w = q.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i) sum += w[i] * nl.source(q[i]);
  return sum;
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Crossing:
      return "Crossing";
    case Classification::NoCrossingByTmax:
      return "NoCrossingByTmax";
    case Classification::Overflow:
      return "Overflow";
  }
  return "?";
}

ShootingTrajectory integrate_trajectory(double alpha, double t_max, double tol,
                                        const Nonlinearity& nl) {
  if (!(alpha >= 0.0)) {
    throw InvalidArgument("integrate_trajectory: alpha must be >= 0");
  }
  if (!(t_max > 0.0) || !(tol > 0.0)) {
    throw InvalidArgument("integrate_trajectory: t_max and tol must be > 0");
  }
  if (nl.sign != Sign::Focusing) {
    throw InvalidArgument("integrate_trajectory: needs a focusing source");
  }
  namespace ode = boost::numeric::odeint;

  ShootingTrajectory tr;
  tr.alpha = alpha;
  tr.t_max = t_max;
  tr.tol = tol;
  auto push = [&tr](double t, const State& x) {
    tr.t_samples.push_back(t);
    tr.y_samples.push_back(x[0]);
    tr.ydot_samples.push_back(x[1]);
  };

  auto rhs = [&nl](const State& x, State& dxdt, double t) {
    dxdt[0] = x[1];
    dxdt[1] = -forcing(x[0], t, nl);
  };

  State x0{0.0, alpha};
  push(0.0, x0);
  auto stepper =
      ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
  stepper.initialize(x0, 0.0, std::min(1e-3, 0.1 * t_max));

  State prev = x0;
  double prev_t = 0.0;
  for (;;) {
    try {
      stepper.do_step(rhs);
    } catch (const ForcingOverflow&) {
      tr.classification = Classification::Overflow;
      tr.y_end = prev[0];
      tr.ydot_end = prev[1];
      return tr;
    }
    double t = stepper.current_time();
    State x = stepper.current_state();
    const bool last = t >= t_max;
    if (last && t > t_max) {
      t = t_max;
      stepper.calc_state(t, x);
    }

    if (!tr.turning_time && prev[1] >= 0.0 && x[1] < 0.0 && x[0] > 0.0) {
      tr.turning_time = bisect_event(stepper, prev_t, t,
                                     [](const State& s) { return s[1] < 0.0; });
    }
    if (prev[0] > 0.0 && x[0] <= 0.0) {
      const double tc = bisect_event(
          stepper, prev_t, t, [](const State& s) { return s[0] <= 0.0; });
      State xc;
      stepper.calc_state(tc, xc);
      xc[0] = 0.0;
      push(tc, xc);
      tr.classification = Classification::Crossing;
      tr.crossing_time = tc;
      tr.y_end = 0.0;
      tr.ydot_end = xc[1];
      return tr;
    }
    push(t, x);
    prev = x;
    prev_t = t;
    if (last) break;
  }
  tr.classification = Classification::NoCrossingByTmax;
  tr.y_end = prev[0];
  tr.ydot_end = prev[1];
  return tr;
}

ScanTable scan_alpha(std::span<const double> alphas, double t_max, double tol,
                     const Nonlinearity& nl) {
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) {
      throw InvalidArgument("scan_alpha: alphas must be strictly increasing");
    }
  }
  ScanTable table;
  for (double a : alphas) {
    ScanRow row;
    row.alpha = a;
    try {
      const auto tr = integrate_trajectory(a, t_max, tol, nl);
      row.classification = tr.classification;
      row.crossing_time = tr.crossing_time;
      row.certain_to_cross = tr.certain_to_cross();
      row.y_end = tr.y_end;
      row.ydot_end = tr.ydot_end;
    } catch (const Error& e) {
      row.classification = Classification::Overflow;
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  std::optional<std::size_t> open;
  for (std::size_t i = 0; i <= table.rows.size(); ++i) {
    const bool inside =
        i < table.rows.size() && table.rows[i].error.empty() &&
        table.rows[i].classification == Classification::NoCrossingByTmax;
    if (inside && !open) open = i;
    if (!inside && open) {
      table.windows.emplace_back(table.rows[*open].alpha,
                                 table.rows[i - 1].alpha);
      open.reset();
    }
  }
  return table;
}

double bisect_boundary(double crossing_alpha, double noncrossing_alpha,
                       double t_max, double tol, const Nonlinearity& nl) {
  auto crosses = [&](double a) {
    return integrate_trajectory(a, t_max, tol, nl).certain_to_cross();
  };
  const bool c1 = crosses(crossing_alpha);
  const bool c2 = crosses(noncrossing_alpha);
  if (c1 == c2) {
    throw BracketError("bisect_boundary: both slopes classify as " +
                       std::string(c1 ? "crossing" : "non-crossing"));
  }
  if (!c1) {
    throw BracketError(
        "bisect_boundary: arguments swapped (first slope does not cross)");
  }
  double c = crossing_alpha;
  double nc = noncrossing_alpha;
  while (std::abs(c - nc) > 1e-6) {
    const double m = 0.5 * (c + nc);
    if (crosses(m)) {
      c = m;
    } else {
      nc = m;
    }
  }
  return 0.5 * (c + nc);
}

SingularProfile to_profile(const ShootingTrajectory& traj, GridPtr grid) {
  if (grid->kind() != DomainKind::UnitDisc) {
    throw InvalidArgument("to_profile: grid must be a UnitDisc grid");
  }
  if (traj.classification != Classification::NoCrossingByTmax) {
    throw InvalidArgument("to_profile: trajectory must stay positive to t_max");
  }
  const auto r = grid->nodes();
  const double t_needed = -std::log(r[1]);
  if (t_needed > traj.t_max) {
    throw InvalidArgument("to_profile: grid needs t = " +
                          std::to_string(t_needed) + " beyond t_max = " +
                          std::to_string(traj.t_max));
  }
  std::vector<double> v(r.size());
  v[0] = traj.y_end;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    v[i] = interpolate(traj, -std::log(r[i]));
  }
  v.back() = 0.0;
  SingularProfile p{RadialField(std::move(grid), std::move(v)), traj.alpha,
                    traj.y_end, std::make_shared<ShootingTrajectory>(traj)};
  return p;
}

double stationarity_residual(const RadialField& u, const Nonlinearity& nl,
                             double r_lo, double r_hi) {
  const RadialField lap = discrete_laplacian(u);
  const auto r = u.grid().nodes();
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    m = std::max(m, std::abs(lap[i] + nl.source(u[i])));
  }
  return m;
}

namespace {

// Discrete problem L u + lambda f(u) = 0 on nodes 0..n-1 with u_n = 0.
class BvpSystem {
 public:
  BvpSystem(const RadialGrid& grid, const Nonlinearity& nl)
      : L_(grid.laplacian()), m_(grid.size()), n_(m_ - 1), nl_(nl) {}

  std::size_t size() const { return m_; }

  // Returns the scaled sup residual; raw sup residual through *raw.
  double residual(const std::vector<double>& u, double lambda,
                  std::vector<double>& res, double* raw = nullptr) const {
    res.assign(m_, 0.0);
    double scaled = 0.0;
    double r_max = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double lu = L_.diag[i] * u[i] + L_.upper[i] * u[i + 1];
      if (i > 0) lu += L_.lower[i] * u[i - 1];
      res[i] = lu + lambda * nl_.source(u[i]);
      r_max = std::max(r_max, std::abs(res[i]));
      scaled = std::max(scaled, std::abs(res[i]) / (1.0 + std::abs(L_.diag[i])));
    }
    if (raw) *raw = r_max;
    return scaled;
  }

  Tridiagonal jacobian(const std::vector<double>& u, double lambda) const {
    Tridiagonal J;
    J.lower.assign(m_, 0.0);
    J.diag.assign(m_, 1.0);
    J.upper.assign(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      J.lower[i] = L_.lower[i];
      J.diag[i] = L_.diag[i] + lambda * nl_.source_derivative(u[i]);
      J.upper[i] = L_.upper[i];
    }
    J.upper[n_ - 1] = 0.0;
    return J;
  }

  std::vector<double> source(const std::vector<double>& u) const {
    std::vector<double> s(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) s[i] = nl_.source(u[i]);
    return s;
  }

  // Newton on (u, lambda) with the extra equation u_0 = c. The bordered
  // system is reduced to two tridiagonal solves.
  bool solve_pinned(std::vector<double>& u, double& lambda, double c) const {
    std::vector<double> res;
    for (int it = 0; it < 30; ++it) {
      double norm;
      try {
        norm = residual(u, lambda, res);
      } catch (const OverflowGuardError&) {
        return false;
      }
      if (norm <= 1e-12 && std::abs(u[0] - c) <= 1e-14 * c) return true;
      const Tridiagonal J = jacobian(u, lambda);
      std::vector<double> rhs(m_);
      for (std::size_t i = 0; i < m_; ++i) rhs[i] = -res[i];
      const auto x1 = solve_tridiagonal(J, rhs);
      const auto x2 = solve_tridiagonal(J, source(u));
      if (x2[0] == 0.0) return false;
      const double dl = (x1[0] - (c - u[0])) / x2[0];
      for (std::size_t i = 0; i < n_; ++i) u[i] += x1[i] - dl * x2[i];
      lambda += dl;
      if (!std::isfinite(lambda)) return false;
    }
    return false;
  }

 private:
  const Tridiagonal& L_;
  std::size_t m_;
  std::size_t n_;
  const Nonlinearity& nl_;
};

std::vector<double> rescaled(const std::vector<double>& u, double factor) {
  std::vector<double> v(u);
  for (double& x : v) x *= factor;
  return v;
}

}  // namespace

BvpResult solve_regular_bvp(GridPtr grid, const Nonlinearity& nl,
                            double init_amplitude, double tol,
                            std::size_t max_iterations) {
  if (grid->kind() != DomainKind::UnitDisc) {
    throw InvalidArgument("solve_regular_bvp: grid must be a UnitDisc grid");
  }
  if (nl.sign != Sign::Focusing || nl.variant != Variant::Full) {
    throw InvalidArgument("solve_regular_bvp: needs the focusing full source");
  }
  if (!(init_amplitude > 0.0) || init_amplitude > nl.overflow_guard) {
    throw InvalidArgument(
        "solve_regular_bvp: init_amplitude must lie in (0, overflow guard]");
  }
  const BvpSystem sys(*grid, nl);
  const auto r = grid->nodes();
  const std::size_t m = sys.size();
  BvpResult out{RadialField::zeros(grid), 0, 0.0, 0.0, false, 0};

  // Continuation in the centre value c = u(0): solve L u + lambda f(u) = 0,
  // u(0) = c, starting at c = init_amplitude, and move c until lambda
  // brackets 1.
  std::vector<double> u(m);
  for (std::size_t i = 0; i < m; ++i) u[i] = init_amplitude * (1 - r[i] * r[i]);
  u[m - 1] = 0.0;
  double c = init_amplitude;
  double lambda;
  {
    std::vector<double> res;
    sys.residual(u, 0.0, res);  // L u
    const auto s = sys.source(u);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num -= res[i] * u[i];
      den += s[i] * u[i];
    }
    lambda = den > 0.0 ? num / den : 1.0;
  }
  if (!sys.solve_pinned(u, lambda, c)) {
    throw ConvergenceError("solve_regular_bvp: no pinned solution at u(0) = " +
                           std::to_string(c));
  }
  const double dir = lambda > 1.0 ? 1.0 : -1.0;
  double dc = 0.05;
  double c_far = c, lambda_far = lambda;
  while ((lambda - 1.0) * dir > 0.0) {
    if (++out.continuation_steps > 2000 || dc < 1e-8) {
      throw ConvergenceError("solve_regular_bvp: continuation stalled at c = " +
                             std::to_string(c));
    }
    const double c_new = c + dir * dc;
    if (!(c_new > 0.0) || c_new > nl.overflow_guard) {
      throw ConvergenceError("solve_regular_bvp: continuation left the range");
    }
    std::vector<double> trial = rescaled(u, c_new / c);
    double lambda_new = lambda;
    if (!sys.solve_pinned(trial, lambda_new, c_new)) {
      dc *= 0.5;
      continue;
    }
    c_far = c;
    lambda_far = lambda;
    u = std::move(trial);
    c = c_new;
    lambda = lambda_new;
    dc = std::min(1.5 * dc, 0.2);
  }
  // Illinois regula falsi on lambda(c) = 1 inside the bracket [c_far, c].
  double g_far = lambda_far - 1.0;
  int same_side = 0;
  for (int k = 0; k < 100 && std::abs(lambda - 1.0) > 1e-10; ++k) {
    const double g = lambda - 1.0;
    const double c_new = c - g * (c - c_far) / (g - g_far);
    std::vector<double> trial = rescaled(u, c_new / c);
    double lambda_new = lambda;
    if (!sys.solve_pinned(trial, lambda_new, c_new)) break;
    ++out.continuation_steps;
    if ((lambda_new - 1.0) * g < 0.0) {
      c_far = c;
      g_far = g;
      same_side = 0;
    } else if (++same_side >= 1) {
      g_far *= 0.5;
    }
    u = std::move(trial);
    c = c_new;
    lambda = lambda_new;
  }

  // Damped Newton at lambda = 1 with the natural monotonicity test: the
  // simplified correction at the trial point, computed with the same
  // Jacobian, has to shrink.
  std::vector<double> res;
  double raw = 0.0;
  double norm = sys.residual(u, 1.0, res, &raw);
  // On strongly graded grids the scaled residual alone is lenient, so the
  // last Newton correction has to be small as well.
  double last_correction = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it <= max_iterations; ++it) {
    if (norm <= tol && last_correction <= 1e-12 * (1.0 + sup_norm(u))) {
      out.field = RadialField(grid, u);
      out.iterations = it;
      out.residual = norm;
      out.raw_residual = raw;
      return out;
    }
    if (it == max_iterations) break;
    const Tridiagonal J = sys.jacobian(u, 1.0);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = -res[i];
    const auto delta = solve_tridiagonal(J, rhs);
    const double delta_norm = sup_norm(delta);
    last_correction = delta_norm;

    double step = 1.0;
    std::vector<double> trial(m);
    std::vector<double> trial_res;
    for (int k = 0;; ++k) {
      for (std::size_t i = 0; i < m; ++i) trial[i] = u[i] + step * delta[i];
      bool ok = true;
      double tn = 0.0, traw = 0.0;
      try {
        tn = sys.residual(trial, 1.0, trial_res, &traw);
      } catch (const OverflowGuardError&) {
        ok = false;
      }
      if (ok && delta_norm > 1e-12 * (1.0 + sup_norm(u))) {
        std::vector<double> neg(m);
        for (std::size_t i = 0; i < m; ++i) neg[i] = -trial_res[i];
        const double simplified = sup_norm(solve_tridiagonal(J, neg));
        ok = simplified <= (1.0 - 0.25 * step) * delta_norm;
      }
      if (ok) {
        u.swap(trial);
        res.swap(trial_res);
        norm = tn;
        raw = traw;
        break;
      }
      if (k >= 30) {
        throw ConvergenceError(
            "solve_regular_bvp: damping failed at iteration " +
            std::to_string(it));
      }
      step *= 0.5;
      out.damping_engaged = true;
    }
  }
  throw ConvergenceError("solve_regular_bvp: no convergence after " +
                         std::to_string(max_iterations) + " iterations");
}

SingularValidation validate_singular(const SingularProfile& q,
                                     const Nonlinearity& nl,
                                     std::span<const double> radii) {
  if (!q.trajectory) {
    throw InvalidArgument("validate_singular: profile has no trajectory");
  }
  SingularValidation v;
  GridSpec fine = q.field.grid().spec();
  fine.n *= 2;
  const SingularProfile q2 = to_profile(*q.trajectory, RadialGrid::build(fine));
  v.f_l1_n = f_l1_skip_origin(q.field, nl);
  v.f_l1_2n = f_l1_skip_origin(q2.field, nl);
  v.f_l1_gap = std::abs(v.f_l1_2n - v.f_l1_n) / std::abs(v.f_l1_2n);

  for (double rad : radii) {
    LuxemburgQuery lq{q.field, rad};
    lq.skip_origin = true;
    v.localization.push_back({rad, luxemburg_norm(lq)});
  }
  v.strictly_decreasing = true;
  for (std::size_t k = 1; k < v.localization.size(); ++k) {
    if (!(v.localization[k].norm < v.localization[k - 1].norm)) {
      v.strictly_decreasing = false;
    }
  }
  v.last_below = !v.localization.empty() && v.localization.back().norm < 0.1;
  return v;
}

}  // namespace expheat
