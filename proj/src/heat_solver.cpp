#include "expheat/heat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numbers>

#include "expheat/error.hpp"
#include "expheat/tridiagonal.hpp"

namespace expheat {

namespace {

std::vector<double> evaluate_source(std::span<const double> u,
                                    const Nonlinearity& nl) {
  std::vector<double> s(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s[i] = nl.source(u[i]);
  return s;
}

double sup_source_derivative(std::span<const double> u,
                             const Nonlinearity& nl) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(nl.source_derivative(x)));
  return m;
}

double sup_abs(std::span<const double> u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

double weighted_sq(const RadialGrid& grid, std::span<const double> u) {
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i] * u[i];
  return s;
}

// (I - theta dt L) v = (I + (1 - theta) dt L) u + dt src, v_n = 0.
std::vector<double> theta_solve(const RadialGrid& grid,
                                std::span<const double> u,
                                std::span<const double> src, double dt,
                                double theta) {
  const auto& op = grid.laplacian();
  const std::size_t m = u.size();
  const std::size_t n = m - 1;
  Tridiagonal a;
  a.lower.assign(m, 0.0);
  a.diag.assign(m, 1.0);
  a.upper.assign(m, 0.0);
  std::vector<double> rhs(m, 0.0);
  const double ei = theta * dt;
  const double ee = (1.0 - theta) * dt;
  for (std::size_t i = 0; i < n; ++i) {
    double lu = op.diag[i] * u[i] + op.upper[i] * u[i + 1];
    if (i > 0) lu += op.lower[i] * u[i - 1];
    rhs[i] = u[i] + ee * lu + dt * src[i];
    a.lower[i] = -ei * op.lower[i];
    a.diag[i] = 1.0 - ei * op.diag[i];
    a.upper[i] = -ei * op.upper[i];
  }
  // Column n is the homogeneous Dirichlet value.
  a.upper[n - 1] = 0.0;
  rhs[n] = 0.0;
  return solve_tridiagonal(a, rhs);
}

struct StepResult {
  std::vector<double> values;
  bool corrector_skipped = false;
};

StepResult imex_step(const RadialGrid& grid, std::span<const double> u,
                     double dt, double theta, const Nonlinearity& nl,
                     SourceScheme scheme, bool allow_predictor_fallback) {
  const auto s0 = evaluate_source(u, nl);
  auto predictor = theta_solve(grid, u, s0, dt, theta);
  if (scheme == SourceScheme::Euler) return {std::move(predictor), false};
  std::vector<double> s1;
  try {
    s1 = evaluate_source(predictor, nl);
  } catch (const OverflowGuardError&) {
    if (!allow_predictor_fallback) throw;
    return {std::move(predictor), true};
  }
  for (std::size_t i = 0; i < s1.size(); ++i) s1[i] = 0.5 * (s0[i] + s1[i]);
  return {theta_solve(grid, u, s1, dt, theta), false};
}

std::string state_dump(double t, double dt, double linf) {
  char buf[160];
  std::snprintf(buf, sizeof buf, " [t = %.17g, dt = %.6g, ||u||_inf = %.6g]",
                t, dt, linf);
  return buf;
}

}  // namespace

std::string to_string(SourceScheme s) {
  return s == SourceScheme::Euler ? "euler" : "heun";
}

std::string to_string(Outcome o) {
  return o == Outcome::BlowUp ? "BlowUp" : "CompletedToTend";
}

void SolverConfig::validate(const Nonlinearity& nl) const {
  if (!(dt_min > 0.0) || !(dt_min <= dt_init)) {
    throw InvalidArgument("SolverConfig: need 0 < dt_min <= dt_init");
  }
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw InvalidArgument("SolverConfig: theta must lie in [0, 1]");
  }
  if (!(cfl_safety > 0.0)) {
    throw InvalidArgument("SolverConfig: cfl_safety must be positive");
  }
  if (!(t_end > 0.0)) throw InvalidArgument("SolverConfig: t_end must be > 0");
  if (!(u_max_blowup > 0.0) || !(u_max_blowup < nl.overflow_guard)) {
    throw InvalidArgument(
        "SolverConfig: u_max_blowup must lie below the overflow guard");
  }
  if (snapshot_stride == 0) {
    throw InvalidArgument("SolverConfig: snapshot_stride must be >= 1");
  }
}

double scaled_bessel_i0(double x) {
  x = std::abs(x);
  if (x < 500.0) return std::cyl_bessel_i(0.0, x) * std::exp(-x);
  // Hankel asymptotics: e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k a_k / x^k.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (8.0 * k * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

RadialField heat_propagate_exact(const RadialField& field, double t) {
  if (!(t > 0.0)) throw InvalidArgument("heat_propagate_exact: t must be > 0");
  const auto r = field.grid().nodes();
  const auto w = field.grid().weights();
  const auto phi = field.values();
  const double four_t = 4.0 * t;
  const double norm = 1.0 / (std::numbers::pi * four_t);
  // Beyond this distance the Gaussian factor is below e^{-80}.
  const double reach = std::sqrt(80.0 * four_t);
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (phi[j] == 0.0) continue;
      const double d = r[i] - r[j];
      if (std::abs(d) > reach) continue;
      sum += w[j] * phi[j] * std::exp(-d * d / four_t) *
             scaled_bessel_i0(r[i] * r[j] / (2.0 * t));
    }
    out[i] = norm * sum;
  }
  return RadialField(field.grid_ptr(), std::move(out));
}

RadialField step_imex(const RadialField& u, double dt, const Nonlinearity& nl,
                      const SolverConfig& cfg) {
  if (!(dt > 0.0)) throw InvalidArgument("step_imex: dt must be > 0");
  auto res = imex_step(u.grid(), u.values(), dt, cfg.theta, nl, cfg.scheme,
                       false);
  for (std::size_t i = 0; i < res.values.size(); ++i) {
    if (!std::isfinite(res.values[i])) {
      throw SolverError("step_imex: non-finite value at node " +
                        std::to_string(i));
    }
  }
  return RadialField(u.grid_ptr(), std::move(res.values));
}

EvolutionRecord evolve(const RadialField& u0, const Nonlinearity& nl,
                       const SolverConfig& cfg) {
  cfg.validate(nl);
  const RadialGrid& grid = u0.grid();
  EvolutionRecord rec;
  rec.nl = nl;
  rec.config = cfg;
  rec.smallest_dt = cfg.dt_init;

  std::vector<double> u(u0.values().begin(), u0.values().end());
  double t = 0.0;
  double dissipation = 0.0;
  double v_functional = 0.0;
  double l2sq = weighted_sq(grid, u);

  auto record = [&](std::span<const double> state, double time) {
    RadialField f(u0.grid_ptr(), std::vector<double>(state.begin(), state.end()));
    rec.snapshots.push_back(energy(f, nl));
    rec.times.push_back(time);
    rec.dissipation_cum.push_back(dissipation);
    rec.v_functional.push_back(v_functional);
    if (cfg.store_fields) rec.fields.push_back(std::move(f));
  };
  record(u, 0.0);

  std::deque<double> linf_history{sup_abs(u)};
  double dt = cfg.dt_init;
  std::size_t since_snapshot = 0;
  const double t_tol = 1e-12 * cfg.t_end;

  while (t < cfg.t_end - t_tol) {
    if (rec.steps >= cfg.max_steps) {
      throw SolverError("evolve: step budget exhausted" +
                        state_dump(t, dt, linf_history.back()));
    }
    const double theta =
        rec.steps < cfg.implicit_startup_steps ? 1.0 : cfg.theta;
    double h = std::min(dt, cfg.t_end - t);
    const double linf_now = linf_history.back();
    if (linf_now > nl.overflow_guard) {
      throw SolverError("evolve: state beyond the overflow guard" +
                        state_dump(t, h, linf_now));
    }
    const double fprime = sup_source_derivative(u, nl);
    bool reduced = false;
    StepResult step;
    for (;;) {
      if (h * fprime > cfg.cfl_safety && h > cfg.dt_min) {
        h = std::max(0.5 * h, cfg.dt_min);
        reduced = true;
        continue;
      }
      step = imex_step(grid, u, h, theta, nl, cfg.scheme, true);
      const bool finite = std::all_of(step.values.begin(), step.values.end(),
                                      [](double x) { return std::isfinite(x); });
      const double linf_next = finite ? sup_abs(step.values) : 0.0;
      const double change =
          std::abs(linf_next - linf_now) / std::max(linf_now, 1e-300);
      if ((!finite || step.corrector_skipped || change > 0.1) &&
          h > cfg.dt_min) {
        h = std::max(0.5 * h, cfg.dt_min);
        reduced = true;
        ++rec.rejected_steps;
        continue;
      }
      if (!finite) {
        throw SolverError("evolve: non-finite state at dt_min" +
                          state_dump(t, h, linf_now));
      }
      break;
    }

    // Accept.
    const double next_l2sq = weighted_sq(grid, step.values);
    {
      const auto w = grid.weights();
      double dsq = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = step.values[i] - u[i];
        dsq += w[i] * d * d;
      }
      dissipation += dsq / h;
    }
    v_functional += 0.25 * h * (l2sq + next_l2sq);
    l2sq = next_l2sq;
    t += h;
    ++rec.steps;
    ++since_snapshot;
    rec.smallest_dt = std::min(rec.smallest_dt, h);
    std::vector<double> previous = std::move(u);
    u = std::move(step.values);

    linf_history.push_back(sup_abs(u));
    if (linf_history.size() > 11) linf_history.pop_front();

    if (linf_history.back() >= cfg.u_max_blowup && h <= cfg.dt_min) {
      bool rising = linf_history.size() == 11;
      for (std::size_t k = 1; rising && k < linf_history.size(); ++k) {
        rising = linf_history[k] > linf_history[k - 1];
      }
      if (rising) {
        rec.outcome = Outcome::BlowUp;
        rec.t_detect = t;
        if (sup_abs(u) <= nl.overflow_guard) {
          record(u, t);
        } else if (since_snapshot > 1) {
          // The detecting state is beyond the guard; keep the last state at
          // which the energy can still be evaluated. Its accumulators are
          // rolled back to that time.
          const double keep_d = dissipation;
          const double keep_v = v_functional;
          const auto w = grid.weights();
          double dsq = 0.0;
          for (std::size_t i = 0; i < u.size(); ++i) {
            const double d = u[i] - previous[i];
            dsq += w[i] * d * d;
          }
          dissipation -= dsq / h;
          v_functional -= 0.25 * h * (weighted_sq(grid, previous) + l2sq);
          record(previous, t - h);
          dissipation = keep_d;
          v_functional = keep_v;
        }
        return rec;
      }
    }

    if (since_snapshot >= cfg.snapshot_stride) {
      record(u, t);
      since_snapshot = 0;
    }
    dt = reduced ? h : std::min(1.2 * h, cfg.dt_init);
  }
  if (since_snapshot > 0) record(u, t);
  return rec;
}

}  // namespace expheat
