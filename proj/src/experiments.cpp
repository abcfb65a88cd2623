#include "expheat/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>
#include <string>

#include "expheat/diagnostics.hpp"
#include "expheat/error.hpp"
#include "expheat/orlicz.hpp"
#include "expheat/shooting.hpp"

namespace expheat {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

double gaussian_energy_root(const GridPtr& grid, const Nonlinearity& nl,
                            double width) {
  if (nl.sign != Sign::Focusing) {
    throw InvalidArgument("gaussian_energy_root: needs a focusing nonlinearity");
  }
  auto J = [&](double A) {
    return energy(RadialField::sample(
                      grid, [A](double r) { return A * std::exp(-r * r); }),
                  nl)
        .energy_j;
  };
  double lo = 1e-3;
  double hi = 1.0;
  if (!(J(lo) > 0.0)) {
    throw BracketError("gaussian_energy_root: J is not positive at small A");
  }
  while (J(hi) > 0.0) {
    lo = hi;
    hi *= 1.5;
    if (hi > nl.overflow_guard) {
      throw BracketError("gaussian_energy_root: no sign change below the guard");
    }
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (J(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

double refined_decay_constant(double a) {
  if (!(a > 2.0)) throw InvalidArgument("refined_decay_constant: needs a > 2");
  return std::exp2((a * a + 10.0 * a - 12.0) / (2.0 * a * (a - 2.0)));
}

std::vector<DecayBoundRow> decay_bound_check(
    const EvolutionRecord& rec, double u0_l2,
    const std::vector<double>& refined_alphas, double t_from) {
  std::vector<DecayBoundRow> rows;
  auto evaluate = [&](double alpha, auto bound_at) {
    DecayBoundRow row;
    row.alpha = alpha;
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
      if (rec.times[k] < t_from) continue;
      row.worst_ratio = std::max(row.worst_ratio,
                                 rec.snapshots[k].linf / bound_at(rec.times[k]));
    }
    row.holds = row.worst_ratio <= 1.01;
    rows.push_back(row);
  };
  evaluate(0.0, [&](double) { return std::sqrt(2.0) * u0_l2; });
  for (double a : refined_alphas) {
    const double K = refined_decay_constant(a);
    evaluate(a, [&](double t) { return K * std::pow(t, -1.0 / a) * u0_l2; });
  }
  return rows;
}

namespace {

RadialField gaussian(const GridPtr& grid, double A) {
  return RadialField::sample(grid,
                             [A](double r) { return A * std::exp(-r * r); });
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1]) return false;
  }
  return true;
}

std::vector<double> column(const EvolutionRecord& rec,
                           double EnergySnapshot::*member) {
  std::vector<double> out;
  out.reserve(rec.snapshots.size());
  for (const auto& s : rec.snapshots) out.push_back(s.*member);
  return out;
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json evolution_metrics(const EvolutionRecord& rec) {
  json m;
  m["outcome"] = to_string(rec.outcome);
  m["t_detect"] = optional_json(rec.t_detect);
  m["t_final"] = rec.times.back();
  m["steps"] = rec.steps;
  m["rejected_steps"] = rec.rejected_steps;
  m["smallest_dt"] = rec.smallest_dt;
  m["snapshots"] = rec.times.size();
  m["final_linf"] = rec.snapshots.back().linf;
  m["final_l2"] = rec.snapshots.back().l2;
  return m;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, RunSummary& s)
      : cfg_(cfg), s_(s), dir_(cfg.output_dir) {}

  void write_evolution(const std::string& name, const EvolutionRecord& rec) {
    write_evolution_csv(dir_ / name, rec);
    s_.files.push_back(name);
  }
  void write_columns(const std::string& name,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& cols) {
    write_columns_csv(dir_ / name, header, cols);
    s_.files.push_back(name);
  }
  void write_scan(const std::string& name, const ScanTable& t) {
    write_scan_csv(dir_ / name, t);
    s_.files.push_back(name);
  }
  void write_profile(const std::string& name, const RadialField& f) {
    write_profile_csv(dir_ / name, f);
    s_.files.push_back(name);
  }

  void evolve_scenario();
  void shoot();
  void scan();
  void orlicz();
  void global_decay();
  void blowup();
  void nonuniqueness();
  void mt_sharpness();
  void degiorgi();

 private:
  const RunConfig& cfg_;
  RunSummary& s_;
  fs::path dir_;
};

void Runner::evolve_scenario() {
  const auto grid = RadialGrid::build(cfg_.grid_spec());
  const auto nl = cfg_.nonlinearity();
  auto sc = cfg_.solver();
  sc.store_fields = true;
  const auto u0 = gaussian(grid, cfg_.amplitude);
  const auto rec = evolve(u0, nl, sc);
  write_evolution("evolution.csv", rec);

  const auto d = dissipation_check(rec);
  s_.outcome = to_string(rec.outcome);
  s_.metrics = evolution_metrics(rec);
  s_.metrics["u0_l2"] = lp_norm(u0, 2.0);
  s_.metrics["energy_j0"] = rec.snapshots.front().energy_j;
  s_.metrics["dissipation_max_interval_residual"] = d.max_interval_residual;
  s_.metrics["dissipation_max_cumulative_residual"] = d.max_cumulative_residual;

  s_.check("j_nonincreasing", nonincreasing(column(rec, &EnergySnapshot::energy_j)));
  if (nl.sign == Sign::Defocusing) {
    s_.check("l2_nonincreasing", nonincreasing(column(rec, &EnergySnapshot::l2)));
  }
}

void Runner::shoot() {
  const auto nl = Nonlinearity::focusing();
  const auto traj = integrate_trajectory(cfg_.alpha, cfg_.t_max, cfg_.tol, nl);
  write_columns("trajectory.csv", {"t", "y", "ydot"},
                {traj.t_samples, traj.y_samples, traj.ydot_samples});

  s_.outcome = to_string(traj.classification);
  auto& m = s_.metrics;
  m["alpha"] = traj.alpha;
  m["classification"] = to_string(traj.classification);
  m["crossing_time"] = optional_json(traj.crossing_time);
  m["turning_time"] = optional_json(traj.turning_time);
  m["y_end"] = traj.y_end;
  m["ydot_end"] = traj.ydot_end;
  m["samples"] = traj.t_samples.size();

  // The forcing is nonnegative while y >= 0, so y' cannot increase there.
  bool concave = true;
  for (std::size_t k = 1; k < traj.t_samples.size(); ++k) {
    if (traj.y_samples[k - 1] < 0.0) break;
    const double slack = 10.0 * cfg_.tol * (1.0 + std::abs(traj.ydot_samples[k - 1]));
    if (traj.ydot_samples[k] > traj.ydot_samples[k - 1] + slack) concave = false;
  }
  s_.check("concave_while_positive", concave);

  if (traj.classification == Classification::NoCrossingByTmax &&
      cfg_.domain == "unit_disc") {
    const auto grid = RadialGrid::build(cfg_.grid_spec());
    if (grid->nodes()[1] >= std::exp(-cfg_.t_max)) {
      const auto q = to_profile(traj, grid);
      write_profile("profile.csv", q.field);
      m["cap"] = q.cap;
      m["stationarity_residual"] =
          stationarity_residual(q.field, nl, 0.05, 0.95);
    }
  }
}

void Runner::scan() {
  const auto nl = Nonlinearity::focusing();
  std::vector<double> alphas(cfg_.alpha_count);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    alphas[i] = alphas.size() == 1
                    ? cfg_.alpha_min
                    : cfg_.alpha_min + (cfg_.alpha_max - cfg_.alpha_min) *
                                           static_cast<double>(i) /
                                           static_cast<double>(alphas.size() - 1);
  }
  const auto table = scan_alpha(alphas, cfg_.t_max, cfg_.tol, nl);
  write_scan("scan.csv", table);

  std::size_t crossings = 0, noncrossings = 0, errors = 0;
  for (const auto& row : table.rows) {
    if (!row.error.empty()) ++errors;
    else if (row.classification == Classification::Crossing) ++crossings;
    else if (row.classification == Classification::NoCrossingByTmax) ++noncrossings;
  }
  auto& m = s_.metrics;
  m["rows"] = table.rows.size();
  m["crossings"] = crossings;
  m["noncrossings"] = noncrossings;
  m["errors"] = errors;
  json windows = json::array();
  for (const auto& [a, b] : table.windows) windows.push_back({a, b});
  m["windows"] = windows;

  // Refine every transition of the crossing certificate. A slope that has
  // turned while positive crosses later, so it brackets from the crossing
  // side even when the table lists it as NoCrossingByTmax.
  json boundaries = json::array();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    if (!a.error.empty() || !b.error.empty()) continue;
    if (a.certain_to_cross == b.certain_to_cross) continue;
    const bool a_cross = a.certain_to_cross;
    json entry;
    entry["between"] = {a.alpha, b.alpha};
    try {
      entry["alpha"] = a_cross ? bisect_boundary(a.alpha, b.alpha, cfg_.t_max,
                                                 cfg_.tol, nl)
                               : bisect_boundary(b.alpha, a.alpha, cfg_.t_max,
                                                 cfg_.tol, nl);
    } catch (const BracketError& e) {
      entry["alpha"] = nullptr;
      entry["note"] = e.what();
    }
    boundaries.push_back(entry);
  }
  m["boundaries"] = boundaries;
  s_.outcome = crossings && noncrossings ? "both classifications"
                                         : "single classification";
  s_.check("no_integration_errors", errors == 0);
}

void Runner::orlicz() {
  const auto grid = RadialGrid::build(cfg_.grid_spec());
  const auto u = gaussian(grid, cfg_.amplitude);
  LuxemburgQuery q{u, std::nullopt, 1e-10, false};
  if (cfg_.sub_radius > 0.0) q.sub_radius = cfg_.sub_radius;
  const double norm = luxemburg_norm(q);
  const double modular = orlicz_modular(q, norm);

  std::vector<std::vector<double>> cols(5);
  bool embedding_ok = true;
  for (double p : {2.0, 4.0, 6.0}) {
    const auto e = embedding_check(u, p);
    cols[0].push_back(p);
    cols[1].push_back(e.lp);
    cols[2].push_back(e.luxemburg);
    cols[3].push_back(e.ratio);
    cols[4].push_back(e.bound);
    embedding_ok = embedding_ok && e.holds;
  }
  write_columns("embedding.csv", {"p", "lp", "luxemburg", "ratio", "bound"},
                cols);

  s_.outcome = "computed";
  auto& m = s_.metrics;
  m["amplitude"] = cfg_.amplitude;
  m["sub_radius"] = q.sub_radius ? json(*q.sub_radius) : json(nullptr);
  m["luxemburg_norm"] = norm;
  m["modular_at_norm"] = modular;
  s_.check("modular_at_norm_is_one", std::abs(modular - 1.0) <= 1e-6);
  // The embedding is a whole-space statement; it is checked on the field.
  s_.check("embedding_bounds_hold", embedding_ok);
}

void Runner::global_decay() {
  const auto grid = RadialGrid::build(cfg_.grid_spec());
  const auto nl = cfg_.nonlinearity();
  const auto u0 = gaussian(grid, cfg_.amplitude);
  const double u0_l2 = lp_norm(u0, 2.0);
  const auto rec = evolve(u0, nl, cfg_.solver());
  write_evolution("evolution.csv", rec);

  const auto rows = decay_bound_check(rec, u0_l2);
  s_.outcome = to_string(rec.outcome);
  s_.metrics = evolution_metrics(rec);
  s_.metrics["u0_l2"] = u0_l2;
  s_.metrics["sqrt2_bound"] = std::sqrt(2.0) * u0_l2;
  double sup_after = 0.0;
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    if (rec.times[k] >= 0.01) sup_after = std::max(sup_after, rec.snapshots[k].linf);
  }
  s_.metrics["sup_linf_from_0.01"] = sup_after;
  json bounds = json::array();
  for (const auto& r : rows) {
    bounds.push_back({{"alpha", r.alpha == 0.0 ? json(nullptr) : json(r.alpha)},
                      {"worst_ratio", r.worst_ratio},
                      {"holds", r.holds}});
  }
  s_.metrics["bounds"] = bounds;

  s_.check("completed_to_t_end", rec.outcome == Outcome::CompletedToTend);
  s_.check("sqrt2_bound", rows[0].holds);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "refined_bound_alpha_%g", rows[i].alpha);
    s_.check(name, rows[i].holds);
  }
  s_.check("l2_nonincreasing", nonincreasing(column(rec, &EnergySnapshot::l2)));
  s_.check("j_nonincreasing", nonincreasing(column(rec, &EnergySnapshot::energy_j)));
}

void Runner::degiorgi() {
  const auto grid = RadialGrid::build(cfg_.grid_spec());
  const auto nl = cfg_.nonlinearity();
  const auto u0 = gaussian(grid, cfg_.amplitude);
  const double u0_l2 = lp_norm(u0, 2.0);
  auto sc = cfg_.solver();
  sc.store_fields = true;
  const auto rec = evolve(u0, nl, sc);
  write_evolution("evolution.csv", rec);

  DeGiorgiParams p;
  p.M = cfg_.dg_m_factor * std::sqrt(2.0) * u0_l2;
  p.t0 = cfg_.dg_t0;
  p.alpha_dg = cfg_.dg_alpha;
  p.k_max = cfg_.dg_k_max;
  const auto dg = degiorgi_diagnostic(rec, p);
  std::vector<double> ks;
  for (std::size_t k = 0; k < dg.U.size(); ++k) ks.push_back(static_cast<double>(k));
  write_columns("degiorgi.csv", {"k", "c_k", "T_k", "U_k"},
                {ks, dg.levels, dg.starts, dg.U});

  // Reported only: the same diagnostic with the ceiling halved.
  DeGiorgiParams half = p;
  half.M = 0.5 * p.M;
  const auto dg_half = degiorgi_diagnostic(rec, half);

  // Iteration lemma cases at and below the threshold.
  std::vector<std::vector<double>> seq(6);
  bool lemma_ok = true;
  json cases = json::array();
  std::size_t index = 0;
  for (double C : {2.0, 3.0}) {
    for (double beta : {1.5, 2.0}) {
      for (double scale : {1.0, 0.5}) {
        SequenceLemmaCase c;
        c.C = C;
        c.beta = beta;
        c.x0 = scale * sequence_lemma_threshold(C, beta);
        const auto r = sequence_lemma_check(c);
        const bool ok = r.hypothesis_holds && r.bound_holds && r.converged_to_zero;
        lemma_ok = lemma_ok && ok;
        cases.push_back({{"C", C}, {"beta", beta}, {"x0", c.x0},
                         {"iterations", r.trace.size()},
                         {"bound_holds", r.bound_holds},
                         {"converged_to_zero", r.converged_to_zero}});
        for (std::size_t n = 0; n < r.trace.size(); ++n) {
          seq[0].push_back(static_cast<double>(index));
          seq[1].push_back(C);
          seq[2].push_back(beta);
          seq[3].push_back(static_cast<double>(n));
          seq[4].push_back(r.trace[n]);
          seq[5].push_back(r.bound_trace[n]);
        }
        ++index;
      }
    }
  }
  write_columns("sequence_lemma.csv", {"case", "C", "beta", "n", "x_n", "bound_n"},
                seq);

  s_.outcome = to_string(rec.outcome);
  s_.metrics = evolution_metrics(rec);
  s_.metrics["M"] = p.M;
  s_.metrics["U"] = dg.U;
  s_.metrics["A"] = dg.A;
  s_.metrics["C"] = dg.C;
  s_.metrics["all_recursion_holds"] = dg.all_recursion_holds;
  s_.metrics["halved_M"] = {{"M", half.M},
                            {"U", dg_half.U},
                            {"all_recursion_holds", dg_half.all_recursion_holds},
                            {"converged", dg_half.converged}};
  s_.metrics["sequence_lemma"] = cases;

  s_.check("U_nonincreasing", dg.nonincreasing);
  s_.check("U_below_1e-6_by_k_max", dg.converged);
  s_.check("sequence_lemma_bound_trace", lemma_ok);
}

void Runner::blowup() {
  const auto grid = RadialGrid::build(cfg_.grid_spec());
  const auto nl = cfg_.nonlinearity();
  if (nl.sign != Sign::Focusing) {
    throw InvalidArgument("blowup needs sign=focusing");
  }
  const double a_star = gaussian_energy_root(grid, nl);
  const double A = cfg_.blowup_factor * a_star;
  const auto u0 = gaussian(grid, A);
  auto sc = cfg_.solver();
  sc.store_fields = true;
  const auto rec = evolve(u0, nl, sc);
  write_evolution("evolution.csv", rec);

  const auto margin = superquadratic_margin(nl);
  const double eps = margin.inf_ratio;
  const double alpha = cfg_.convexity_factor * 2.0 / (2.0 + eps);
  const auto cv = convexity_diagnostic(rec, alpha);
  std::vector<double> holds;
  for (bool h : cv.holds) holds.push_back(h ? 1.0 : 0.0);
  write_columns("convexity.csv", {"t", "lhs", "rhs", "holds"},
                {cv.times, cv.lhs, cv.rhs, holds});

  s_.outcome = to_string(rec.outcome);
  s_.metrics = evolution_metrics(rec);
  s_.metrics["a_star"] = a_star;
  s_.metrics["amplitude"] = A;
  s_.metrics["energy_j0"] = rec.snapshots.front().energy_j;
  s_.metrics["margin_eps"] = eps;
  s_.metrics["margin_argmin"] = margin.argmin;
  s_.metrics["convexity_alpha"] = alpha;
  s_.metrics["t_alpha"] = optional_json(cv.t_alpha);
  s_.metrics["claim_dissipation"] = cv.claim_dissipation;

  s_.check("energy_j0_nonpositive", rec.snapshots.front().energy_j <= 0.0);
  s_.check("blowup_declared", rec.outcome == Outcome::BlowUp);
  s_.check("j_nonincreasing", nonincreasing(column(rec, &EnergySnapshot::energy_j)));
  s_.check("alpha_condition", (2.0 + eps) * alpha / 2.0 > 1.0);
  s_.check("convexity_holds_from_t_alpha", cv.t_alpha.has_value());
  s_.check("claim_dissipation_positive", cv.claim_positive);
}

void Runner::nonuniqueness() {
  if (cfg_.domain != "unit_disc") {
    throw InvalidArgument("nonuniqueness needs domain=unit_disc");
  }
  const auto nl = Nonlinearity::focusing();
  const auto traj = std::make_shared<ShootingTrajectory>(
      integrate_trajectory(cfg_.alpha, cfg_.t_max, cfg_.tol, nl));
  if (traj->classification != Classification::NoCrossingByTmax) {
    throw InvalidArgument("nonuniqueness: alpha=" + std::to_string(cfg_.alpha) +
                          " gives " + to_string(traj->classification) +
                          ", not a non-crossing trajectory");
  }
  const auto grid = RadialGrid::build(cfg_.grid_spec());
  const auto q = to_profile(*traj, grid);
  write_profile("profile.csv", q.field);
  const double res_q = stationarity_residual(q.field, nl, 0.05, 0.95);
  const auto sv = validate_singular(q, nl);

  auto sc = cfg_.solver();
  sc.store_fields = true;
  const double t_early = std::min(0.01, cfg_.t_end);
  sc.t_end = t_early;
  const auto rec_early = evolve(q.field, nl, sc);
  sc.t_end = cfg_.t_end;
  const auto rec = evolve(q.field, nl, sc);
  write_evolution("evolution.csv", rec);

  const auto& u_early = rec_early.fields.back();
  const auto& u_end = rec.fields.back();
  const double linf_early = lp_norm(u_early, INFINITY);
  const double linf_end = lp_norm(u_end, INFINITY);
  const double separation = l2_distance(u_end, q.field);
  {
    const auto r = grid->nodes();
    const auto qv = q.field.values();
    const auto e = u_early.values();
    const auto f = u_end.values();
    write_columns("nonuniqueness.csv", {"r", "Q", "u_early", "u_end"},
                  {{r.begin(), r.end()},
                   {qv.begin(), qv.end()},
                   {e.begin(), e.end()},
                   {f.begin(), f.end()}});
  }
  {
    std::vector<double> radii, norms;
    for (const auto& row : sv.localization) {
      radii.push_back(row.radius);
      norms.push_back(row.norm);
    }
    write_columns("localization.csv", {"radius", "luxemburg_norm"},
                  {radii, norms});
  }

  s_.outcome = to_string(rec.outcome);
  auto& m = s_.metrics;
  m["alpha"] = cfg_.alpha;
  m["cap"] = q.cap;
  m["stationarity_residual_q"] = res_q;
  m["t_early"] = t_early;
  m["t_end"] = rec.times.back();
  m["linf_early"] = linf_early;
  m["linf_end"] = linf_end;
  m["separation_l2"] = separation;
  m["separation_threshold"] = cfg_.separation_threshold;
  m["steps"] = rec.steps;
  m["f_l1_n"] = sv.f_l1_n;
  m["f_l1_2n"] = sv.f_l1_2n;
  m["f_l1_gap"] = sv.f_l1_gap;
  json loc = json::array();
  for (const auto& row : sv.localization) loc.push_back({row.radius, row.norm});
  m["localization"] = loc;

  s_.check("completed_to_t_end", rec.outcome == Outcome::CompletedToTend);
  s_.check("linf_early_finite_below_cap",
           std::isfinite(linf_early) && linf_early < q.cap);
  s_.check("linf_end_finite_below_cap",
           std::isfinite(linf_end) && linf_end < q.cap);
  s_.check("separation_exceeds_threshold",
           separation > cfg_.separation_threshold);
  s_.check("q_residual_below_threshold", res_q < cfg_.separation_threshold);
  s_.check("f_l1_gap_within_2pct", sv.f_l1_gap <= 0.02);
  s_.check("localization_strictly_decreasing", sv.strictly_decreasing);
  s_.check("localization_last_below_0.1", sv.last_below);
}

void Runner::mt_sharpness() {
  const double pi = std::numbers::pi;
  const std::vector<double> alphas = {2.0 * pi, 4.0 * pi, 5.0 * pi};
  const std::vector<double> ks = {2, 4, 8, 16, 32, 64};
  auto spec = cfg_.grid_spec();
  spec.kind = DomainKind::UnitDisc;
  spec.radius = 1.0;
  const auto rows = mt_sharpness_scan(alphas, ks, spec);

  std::vector<std::vector<double>> cols(6);
  for (const auto& r : rows) {
    cols[0].push_back(r.alpha);
    cols[1].push_back(r.k);
    cols[2].push_back(r.seminorm_raw);
    cols[3].push_back(r.l2_squared);
    cols[4].push_back(r.functional);
    cols[5].push_back(r.ratio);
  }
  write_columns("mt_sharpness.csv",
                {"alpha", "k", "seminorm_raw", "l2_squared", "functional",
                 "ratio"},
                cols);

  auto ratios = [&](std::size_t a) {
    std::vector<double> out;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      out.push_back(rows[a * ks.size() + j].ratio);
    }
    return out;
  };
  const auto r2 = ratios(0), r4 = ratios(1), r5 = ratios(2);
  bool increasing = true;
  for (std::size_t j = 1; j < ks.size(); ++j) {
    if (ks[j - 1] >= 8 && !(r5[j] > r5[j - 1])) increasing = false;
  }

  // int_{B_1} (e^{u^2} - 1) = pi for u = sqrt(ln(1/r)); the origin node is
  // dropped since u is unbounded there.
  const auto grid = RadialGrid::build(spec);
  const double r1 = grid->nodes()[1];
  const auto log_field = RadialField::sample(grid, [r1](double r) {
    return std::sqrt(std::log(1.0 / std::max(r, r1)));
  });
  const double closed = exp_integral(log_field, 1.0, 1.0, true);

  s_.outcome = "computed";
  auto& m = s_.metrics;
  m["ks"] = ks;
  m["ratios_2pi"] = r2;
  m["ratios_4pi"] = r4;
  m["ratios_5pi"] = r5;
  m["growth_2pi"] = r2.back() / r2.front();
  m["growth_4pi"] = r4.back() / r4.front();
  m["growth_5pi"] = r5.back() / r5.front();
  m["log_profile_integral"] = closed;
  m["log_profile_relative_error"] = std::abs(closed - pi) / pi;

  s_.check("bounded_at_2pi", r2.back() / r2.front() < 10.0);
  s_.check("increasing_at_5pi_from_k8", increasing);
  s_.check("growth_at_5pi_exceeds_10", r5.back() / r5.front() > 10.0);
  s_.check("log_profile_integral_within_1pct", std::abs(closed - pi) / pi <= 0.01);
}

}  // namespace

RunSummary run_scenario(const RunConfig& cfg) {
  validate(cfg);
  RunSummary s;
  s.scenario = cfg.scenario;
  s.experiment = cfg.scenario == "experiment" ? cfg.experiment : "";
  s.config = echo(cfg);
  s.tolerances = {{"shooting_tol", cfg.tol},
                  {"bound_slack", 0.01},
                  {"bisection_width", 1e-6},
                  {"bvp_tol", 1e-10},
                  {"luxemburg_rel_tol", 1e-10},
                  {"cfl_safety", cfg.cfl_safety},
                  {"separation_threshold", cfg.separation_threshold}};

  const std::string label =
      cfg.scenario == "experiment" ? "experiment " + cfg.experiment : cfg.scenario;
  const auto start = std::chrono::steady_clock::now();
  Runner r(cfg, s);
  try {
    if (cfg.scenario == "evolve") r.evolve_scenario();
    else if (cfg.scenario == "shoot") r.shoot();
    else if (cfg.scenario == "scan-alpha") r.scan();
    else if (cfg.scenario == "orlicz-norm") r.orlicz();
    else if (cfg.experiment == "global-decay") r.global_decay();
    else if (cfg.experiment == "blowup") r.blowup();
    else if (cfg.experiment == "nonuniqueness") r.nonuniqueness();
    else if (cfg.experiment == "mt-sharpness") r.mt_sharpness();
    else if (cfg.experiment == "degiorgi") r.degiorgi();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(label + ": " + e.what());
  }
  s.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_summary_json(fs::path(cfg.output_dir) / "summary.json", s);
  return s;
}

}  // namespace expheat
