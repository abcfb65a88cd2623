#pragma once

// Scenario runner behind the command-line front end. Each scenario writes its
// CSV files and summary.json into cfg.output_dir and returns the summary;
// the run passes when every recorded check is true.

#include <cstddef>
#include <vector>

#include "expheat/config.hpp"
#include "expheat/heat_solver.hpp"
#include "expheat/nonlinearity.hpp"
#include "expheat/output.hpp"
#include "expheat/radial.hpp"

namespace expheat {

/// The amplitude A* with J(A* e^{-r^2}) = 0 on `grid`, by bisection to
/// absolute width `width`. Requires a focusing nonlinearity.
double gaussian_energy_root(const GridPtr& grid, const Nonlinearity& nl,
                            double width = 1e-12);

/// 2^{(a^2 + 10a - 12) / (2a(a - 2))}, the constant of the refined decay
/// bound ||u(t)||_inf <= K t^{-1/a} ||u0||_{L2}, for a > 2.
double refined_decay_constant(double a);

struct DecayBoundRow {
  double alpha = 0.0;  // 0 encodes the time-uniform sqrt(2) bound
  double worst_ratio = 0.0;  // max over t >= t_from of ||u||_inf / bound(t)
  bool holds = false;        // worst_ratio <= 1.01
};

/// Sup-norm bounds on the snapshots with t >= t_from: first the sqrt(2)
/// bound, then one row per refined exponent.
std::vector<DecayBoundRow> decay_bound_check(
    const EvolutionRecord& rec, double u0_l2,
    const std::vector<double>& refined_alphas = {3.0, 4.0, 8.0},
    double t_from = 0.01);

/// Runs the scenario (or experiment) named in cfg. Module errors are
/// rethrown as Error with the scenario name prefixed; ConfigError passes
/// through unchanged.
RunSummary run_scenario(const RunConfig& cfg);

}  // namespace expheat
