// Acceptance run: one PASS/FAIL line per criterion, followed by details and
// a few reported-only rows. Exit status is nonzero if any criterion fails.
// Experiment outputs land in ./acceptance_runs/.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "expheat/config.hpp"
#include "expheat/diagnostics.hpp"
#include "expheat/error.hpp"
#include "expheat/experiments.hpp"
#include "expheat/heat_solver.hpp"
#include "expheat/orlicz.hpp"
#include "expheat/shooting.hpp"

using namespace expheat;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  static std::string format(const char* fmt, auto... args) {
    if constexpr (sizeof...(args) == 0) {
      return fmt;
    } else {
      char buf[400];
      std::snprintf(buf, sizeof buf, fmt, args...);
      return buf;
    }
  }
  void require(bool ok, const char* fmt, auto... args) {
    notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + format(fmt, args...));
    pass = pass && ok;
  }
  void report(const char* fmt, auto... args) {
    notes.push_back("  info " + format(fmt, args...));
  }
};

RunSummary experiment(const std::string& name, std::vector<std::string> sets,
                      const std::string& tag) {
  sets.push_back("output_dir=acceptance_runs/" + tag);
  return run_scenario(parse_config_text("experiment", name, "", sets));
}

bool check_of(const RunSummary& s, const std::string& name) {
  for (const auto& [k, v] : s.checks) {
    if (k == name) return v;
  }
  throw Error("no check named " + name);
}

GridPtr plane(std::size_t n, double R = 12.0) {
  return RadialGrid::build(n, 2.0, DomainKind::TruncatedPlane, R);
}
GridPtr disc(std::size_t n) {
  return RadialGrid::build(n, 2.0, DomainKind::UnitDisc, 1.0);
}

double gaussian_image_error(const RadialField& u, double s, double t) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.grid().nodes()[i];
    e = std::max(e, std::abs(u[i] - s / (s + t) * std::exp(-r * r / (4 * (s + t)))));
  }
  return e;
}

RadialField gaussian(const GridPtr& g, double A) {
  return RadialField::sample(g, [A](double r) { return A * std::exp(-r * r); });
}

// 1 ------------------------------------------------------------------------
Verdict heat_kernel() {
  Verdict o;
  const double s = 0.25, t = 0.1;
  auto g = plane(2048);
  auto u0 = RadialField::sample(g, [s](double r) { return std::exp(-r * r / (4 * s)); });
  const double e_exact = gaussian_image_error(heat_propagate_exact(u0, t), s, t);
  o.require(e_exact <= 1e-4, "exact propagator sup error %.3e <= 1e-4", e_exact);

  auto imex_error = [&](std::size_t n, double dt) {
    auto gg = plane(n);
    SolverConfig c;
    c.dt_init = dt;
    c.t_end = t;
    c.store_fields = true;
    auto v0 = RadialField::sample(gg, [s](double r) { return std::exp(-r * r / (4 * s)); });
    return gaussian_image_error(evolve(v0, Nonlinearity::zero(), c).fields.back(), s, t);
  };
  const double e1 = imex_error(1024, 1e-3), e2 = imex_error(2048, 5e-4);
  o.require(e1 / e2 >= 3.0, "f-off IMEX error %.3e -> %.3e, reduction %.2fx >= 3", e1, e2,
            e1 / e2);
  return o;
}

// 2 ------------------------------------------------------------------------
Verdict global_bound() {
  Verdict o;
  std::vector<std::vector<bool>> flags;
  for (double R : {12.0, 16.0}) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "global-decay-R%g", R);
    char set[32];
    std::snprintf(set, sizeof set, "radius=%g", R);
    const auto s = experiment("global-decay", {set}, tag);
    std::vector<bool> f;
    for (const char* name : {"sqrt2_bound", "refined_bound_alpha_3", "refined_bound_alpha_4",
                             "refined_bound_alpha_8"}) {
      f.push_back(check_of(s, name));
    }
    flags.push_back(f);
    const double sup = s.metrics["sup_linf_from_0.01"].get<double>();
    const double bound = s.metrics["sqrt2_bound"].get<double>();
    o.require(s.outcome == "CompletedToTend", "R = %g completes to t_end = 2", R);
    o.require(f[0], "R = %g: sup_{t>=0.01} ||u||_inf = %.4f <= 1.01 * %.4f", R, sup, bound);
    for (std::size_t k = 1; k < f.size(); ++k) {
      const auto& row = s.metrics["bounds"][k];
      o.require(f[k], "R = %g: refined bound alpha = %g, worst ratio %.3e", R,
                row["alpha"].get<double>(), row["worst_ratio"].get<double>());
    }
  }
  o.require(flags[0] == flags[1], "bound booleans agree between R = 12 and R = 16");
  return o;
}

// 3 ------------------------------------------------------------------------
Verdict dissipation() {
  Verdict o;
  auto run = [](std::size_t n, double dt, double cfl) {
    SolverConfig c;
    c.dt_init = dt;
    c.cfl_safety = cfl;
    c.t_end = 2.0;
    c.store_fields = true;
    return evolve(gaussian(plane(n), 3.0), Nonlinearity::defocusing(), c);
  };
  const auto coarse = dissipation_check(run(1024, 1e-3, 0.2));
  const auto fine = dissipation_check(run(2048, 5e-4, 0.1));
  const double ratio = coarse.max_cumulative_residual / fine.max_cumulative_residual;
  o.require(ratio >= 3.0, "defocusing cumulative residual %.3e -> %.3e, reduction %.2fx >= 3",
            coarse.max_cumulative_residual, fine.max_cumulative_residual, ratio);
  o.require(coarse.j_nonincreasing && fine.j_nonincreasing,
            "J nonincreasing at every snapshot, defocusing runs");

  SolverConfig c;
  c.t_end = 1.0;
  c.snapshot_stride = 1;
  c.store_fields = true;
  const auto g = plane(2048);
  const double A = 1.12 * gaussian_energy_root(g, Nonlinearity::focusing());
  const auto foc = evolve(gaussian(g, A), Nonlinearity::focusing(), c);
  const auto d = dissipation_check(foc);
  o.require(d.j_nonincreasing, "J nonincreasing at every snapshot, focusing run (%zu snapshots)",
            foc.times.size());
  o.report("focusing cumulative residual %.3e (not asserted)", d.max_cumulative_residual);
  return o;
}

// 4 ------------------------------------------------------------------------
Verdict blowup() {
  Verdict o;
  std::vector<double> t_detect;
  for (std::size_t n : {2048, 4096}) {
    const auto s = experiment("blowup", {"nodes=" + std::to_string(n)},
                              "blowup-n" + std::to_string(n));
    const auto& m = s.metrics;
    o.require(check_of(s, "energy_j0_nonpositive"), "n = %zu: A = %.6f (A* = %.6f), J0 = %.4f <= 0",
              n, m["amplitude"].get<double>(), m["a_star"].get<double>(),
              m["energy_j0"].get<double>());
    o.require(check_of(s, "blowup_declared"), "n = %zu: BlowUp declared", n);
    if (m["t_detect"].is_null()) continue;
    t_detect.push_back(m["t_detect"].get<double>());
    const bool has_t_alpha = !m["t_alpha"].is_null();
    o.require(check_of(s, "alpha_condition") && has_t_alpha,
              "n = %zu: eps = %.4f, alpha = %.4f, (2+eps) alpha / 2 = %.3f > 1, t_alpha = %.6g, "
              "t_detect = %.6g",
              n, m["margin_eps"].get<double>(), m["convexity_alpha"].get<double>(),
              (2 + m["margin_eps"].get<double>()) * m["convexity_alpha"].get<double>() / 2,
              has_t_alpha ? m["t_alpha"].get<double>() : -1.0, t_detect.back());
  }
  if (t_detect.size() == 2) {
    const double rel = std::abs(t_detect[1] - t_detect[0]) / t_detect[1];
    o.require(rel <= 0.2, "t_detect %.6g vs %.6g, relative change %.3f <= 0.2", t_detect[0],
              t_detect[1], rel);
  }
  return o;
}

// 5 ------------------------------------------------------------------------
Verdict degiorgi() {
  Verdict o;
  const auto s = experiment("degiorgi", {}, "degiorgi");
  const auto& U = s.metrics["U"];
  std::string trace;
  for (const auto& u : U) {
    char buf[24];
    std::snprintf(buf, sizeof buf, " %.3g", u.get<double>());
    trace += buf;
  }
  o.require(check_of(s, "U_nonincreasing"), "U_k nonincreasing:%s", trace.c_str());
  o.require(check_of(s, "U_below_1e-6_by_k_max"), "U_8 = %.3g < 1e-6", U.back().get<double>());
  o.require(check_of(s, "sequence_lemma_bound_trace"),
            "iteration lemma bound trace on {2,3} x {1.5,2} x {C0*, C0*/2}");
  const auto& half = s.metrics["halved_M"];
  o.report("M halved: U_8 = %.3g, recursion holds = %d (not asserted)",
           half["U"].back().get<double>(), half["all_recursion_holds"].get<bool>());
  return o;
}

// 6 ------------------------------------------------------------------------
Verdict luxemburg() {
  Verdict o;
  auto g = disc(1024);
  const double c = luxemburg_norm({RadialField::sample(g, [](double) { return 1.0; })});
  const double oracle = 1.0 / std::sqrt(std::log1p(1.0 / pi));
  o.require(std::abs(c - oracle) <= 1e-8, "constant field: %.12f vs %.12f", c, oracle);

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> cen(0.0, 0.8), wid(0.05, 0.5), amp(-3.0, 3.0);
  double worst_homog = 0.0, worst_embed = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = amp(rng), b = cen(rng), w = wid(rng);
    auto u = RadialField::sample(g, [&](double r) {
      const double z = (r - b) / w;
      return a * std::exp(-z * z) * (1 - r * r);
    });
    const double n1 = luxemburg_norm({u});
    const double n2 = luxemburg_norm({u.scaled(2.0)});
    worst_homog = std::max(worst_homog, std::abs(n2 - 2 * n1) / (2 * n1));
    for (double p : {2.0, 4.0, 6.0}) {
      const auto e = embedding_check(u, p);
      worst_embed = std::max(worst_embed, e.ratio / e.bound);
    }
  }
  o.require(worst_homog <= 1e-8, "homogeneity on 100 random fields, worst %.2e", worst_homog);
  o.require(worst_embed <= 1 + 1e-6, "embedding p in {2,4,6}, worst ratio / bound %.6f",
            worst_embed);
  return o;
}

// 7 ------------------------------------------------------------------------
Verdict mt_sharpness() {
  Verdict o;
  const auto s = experiment("mt-sharpness", {}, "mt-sharpness");
  const auto& m = s.metrics;
  o.require(check_of(s, "bounded_at_2pi"), "alpha = 2pi: last/first = %.3f < 10",
            m["growth_2pi"].get<double>());
  o.require(check_of(s, "increasing_at_5pi_from_k8") && check_of(s, "growth_at_5pi_exceeds_10"),
            "alpha = 5pi: increasing for k >= 8, last/first = %.3f > 10",
            m["growth_5pi"].get<double>());
  o.require(check_of(s, "log_profile_integral_within_1pct"),
            "int (e^{u^2}-1) for u = sqrt(ln 1/r): %.6f vs pi, relative error %.2e",
            m["log_profile_integral"].get<double>(), m["log_profile_relative_error"].get<double>());
  o.report("alpha = 4pi: last/first = %.3f (not asserted)", m["growth_4pi"].get<double>());
  return o;
}

// 8 ------------------------------------------------------------------------
Verdict shooting_pipeline() {
  Verdict o;
  const auto nl = Nonlinearity::focusing();
  std::vector<double> alphas;
  for (int i = 0; i < 200; ++i) alphas.push_back(0.05 + i * (10.0 - 0.05) / 199.0);
  const auto table = scan_alpha(alphas, 40.0, 1e-10, nl);
  std::size_t cross = 0, none = 0;
  for (const auto& r : table.rows) {
    cross += r.classification == Classification::Crossing;
    none += r.classification == Classification::NoCrossingByTmax;
  }
  o.require(cross > 0 && none > 0, "scan of 200 slopes: %zu Crossing, %zu NoCrossingByTmax",
            cross, none);

  // The first transition of the crossing certificate gives the bracket.
  double a_cross = NAN, a_none = NAN;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& p = table.rows[i - 1];
    const auto& q = table.rows[i];
    if (p.certain_to_cross != q.certain_to_cross) {
      a_cross = p.certain_to_cross ? p.alpha : q.alpha;
      a_none = p.certain_to_cross ? q.alpha : p.alpha;
      break;
    }
  }
  if (std::isnan(a_cross)) throw Error("scan has no certificate transition");
  std::vector<double> boundary;
  for (double t_max : {30.0, 40.0, 60.0}) {
    boundary.push_back(bisect_boundary(a_cross, a_none, t_max, 1e-10, nl));
  }
  const double spread =
      std::max({boundary[0], boundary[1], boundary[2]}) -
      std::min({boundary[0], boundary[1], boundary[2]});
  o.require(spread < 1e-3, "boundary slope %.9f / %.9f / %.9f at t_max 30/40/60, spread %.2e",
            boundary[0], boundary[1], boundary[2], spread);

  auto g = disc(4096);
  const auto bvp = solve_regular_bvp(g, nl);
  const auto prof = to_profile(integrate_trajectory(boundary[1], 40.0, 1e-10, nl), g);
  double diff = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    diff = std::max(diff, std::abs(bvp.field[i] - prof.field[i]));
  }
  o.require(diff <= 1e-3, "Newton vs boundary profile sup difference %.3e <= 1e-3 (u(0) = %.6f)",
            diff, bvp.field[0]);
  o.report("Newton: %zu iterations, scaled residual %.2e, raw residual %.2e, %zu continuation steps",
           bvp.iterations, bvp.residual, bvp.raw_residual, bvp.continuation_steps);

  // Growth signature well inside the non-crossing window.
  const double a_sing = 0.5 * a_none;
  std::vector<double> y, yd;
  for (double t_max : {30.0, 40.0, 60.0}) {
    const auto tr = integrate_trajectory(a_sing, t_max, 1e-10, nl);
    y.push_back(tr.y_end);
    yd.push_back(tr.ydot_end);
  }
  o.require(y[0] < y[1] && y[1] < y[2] && yd[0] > yd[1] && yd[1] > yd[2],
            "alpha = %.4f: y(t_max) %.6f < %.6f < %.6f, y'(t_max) %.13e > %.13e > %.13e", a_sing,
            y[0], y[1], y[2], yd[0], yd[1], yd[2]);
  return o;
}

// 9 ------------------------------------------------------------------------
Verdict singular_validation() {
  Verdict o;
  const auto nl = Nonlinearity::focusing();
  auto check = [&](double alpha, bool asserted) {
    const auto q = to_profile(integrate_trajectory(alpha, 40.0, 1e-10, nl), disc(4096));
    const auto v = validate_singular(q, nl);
    std::string table;
    for (const auto& row : v.localization) {
      char buf[40];
      std::snprintf(buf, sizeof buf, " %g:%.6f", row.radius, row.norm);
      table += buf;
    }
    if (asserted) {
      o.require(v.f_l1_gap <= 0.02, "alpha = %g: int f(Q) %.6f vs %.6f, gap %.2e <= 0.02", alpha,
                v.f_l1_n, v.f_l1_2n, v.f_l1_gap);
      o.require(v.strictly_decreasing && v.last_below,
                "alpha = %g: localization strictly decreasing, last < 0.1:%s", alpha,
                table.c_str());
    } else {
      o.report("alpha = %g (not asserted): gap %.2e, localization%s", alpha, v.f_l1_gap,
               table.c_str());
    }
  };
  check(0.02, true);
  check(0.5, false);
  return o;
}

// 10 -----------------------------------------------------------------------
Verdict nonuniqueness() {
  Verdict o;
  const auto s = experiment("nonuniqueness", {}, "nonuniqueness");
  const auto& m = s.metrics;
  o.require(check_of(s, "linf_early_finite_below_cap"), "||u(0.01)||_inf = %.6f < cap %.6f",
            m["linf_early"].get<double>(), m["cap"].get<double>());
  o.require(check_of(s, "linf_end_finite_below_cap"), "||u(0.05)||_inf = %.6f < cap %.6f",
            m["linf_end"].get<double>(), m["cap"].get<double>());
  o.require(check_of(s, "separation_exceeds_threshold"), "||u(0.05) - Q||_L2 = %.4e > %.0e",
            m["separation_l2"].get<double>(), m["separation_threshold"].get<double>());
  o.require(check_of(s, "q_residual_below_threshold"),
            "Q stationarity residual on [0.05, 0.95] = %.3e < %.0e",
            m["stationarity_residual_q"].get<double>(), m["separation_threshold"].get<double>());
  return o;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"heat-kernel exactness", heat_kernel},
      {"defocusing global bound", global_bound},
      {"dissipation identity", dissipation},
      {"blow-up", blowup},
      {"De Giorgi recursion", degiorgi},
      {"Luxemburg norm", luxemburg},
      {"Moser-Trudinger sharpness", mt_sharpness},
      {"shooting pipeline", shooting_pipeline},
      {"singular validation", singular_validation},
      {"non-uniqueness", nonuniqueness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("  error ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs);
    for (const auto& n : o.notes) std::printf("%s\n", n.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
