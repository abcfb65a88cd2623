#pragma once

// Post-processing of evolution records: the energy dissipation identity, the
// De Giorgi truncation levels, the blow-up convexity functional, and the
// iteration x_{n+1} <= C^n x_n^beta.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "expheat/heat_solver.hpp"

namespace expheat {

struct DissipationReport {
  // |J(t_{j+1}) - J(t_j) + D(t_{j+1}) - D(t_j)| per snapshot interval.
  std::vector<double> interval_residuals;
  double max_interval_residual = 0.0;
  // max_j |J(t_j) - J(0) + D(t_j)|.
  double max_cumulative_residual = 0.0;
  bool j_nonincreasing = true;
};

/// J is recomputed from the stored fields; D is the record's dissipation_cum.
/// Throws InvalidArgument when the record has no fields.
DissipationReport dissipation_check(const EvolutionRecord& rec);

struct DeGiorgiParams {
  double M = 1.0;
  double t0 = 0.1;
  double alpha_dg = 4.0;
  std::size_t k_max = 8;
};

struct DeGiorgiReport {
  std::vector<double> levels;  // c_k, k = 0..k_max
  std::vector<double> starts;  // T_k
  std::vector<double> U;       // U_k
  double A = 0.0;
  double C = 0.0;
  std::vector<bool> recursion_holds;  // entry k-1 for k = 1..k_max
  bool all_recursion_holds = true;
  bool nonincreasing = true;
  bool converged = false;  // U_{k_max} < 1e-6
};

/// U_k = sup_{t >= T_k} ||(u - c_k)_+||^2 + 2 int_{T_k}^{t_end}
/// ||grad (u - c_k)_+||^2, with sups and integrals over recorded snapshots
/// (trapezoid rule in time).
DeGiorgiReport degiorgi_diagnostic(const EvolutionRecord& rec,
                                   const DeGiorgiParams& p);

struct ConvexityReport {
  std::vector<double> times;
  std::vector<double> lhs;  // V V''
  std::vector<double> rhs;  // (1 + alpha) V'^2
  std::vector<bool> holds;
  std::optional<double> t_alpha;  // empty means "never"
  double claim_dissipation = 0.0;  // int_0^t ||u_t||^2 at the last snapshot
  bool claim_positive = false;
};

/// V' = ||u||^2 / 2 from the snapshots and V'' by nonuniform finite
/// differences of V'. The inequality only counts where V > 0 and V' > 0.
/// t_alpha is the earliest snapshot time from which it holds at every later
/// snapshot. Throws InvalidArgument for fewer than 3 snapshots.
ConvexityReport convexity_diagnostic(const EvolutionRecord& rec, double alpha);

struct SequenceLemmaCase {
  double C = 2.0;
  double beta = 2.0;
  double x0 = 0.0;
  // x_{n+1} = update(n, x_n). When empty the equality C^n x_n^beta is
  // iterated in 50-digit arithmetic, since x0 = C0* sits exactly on the
  // bound and double rounding would be amplified by beta each step.
  std::function<double(std::size_t, double)> update;
  std::size_t n_max = 200;
};

struct SequenceLemmaReport {
  double threshold = 0.0;  // C0* = C^{-1/(beta-1)^2}
  std::vector<double> trace;
  std::vector<double> bound_trace;  // C^{-(1+n(beta-1))/(beta-1)^2}
  bool hypothesis_holds = false;    // x0 <= C0*
  bool bound_holds = false;         // meaningful only under the hypothesis
  bool converged_to_zero = false;   // some x_n < 1e-12
  bool diverged = false;            // x_n > 1e300 or non-finite
};

/// C0* = C^{-1/(beta-1)^2}, evaluated in 50-digit arithmetic and rounded
/// toward zero, so x0 = sequence_lemma_threshold(C, beta) meets the
/// hypothesis exactly. Rounding up would put x0 above the bound, and the
/// excess grows like (1 + delta)^{beta^n}.
double sequence_lemma_threshold(double C, double beta);

/// Iterates until x_n < 1e-12, divergence, or n_max.
/// Throws InvalidArgument unless C > 1, beta > 1, x0 >= 0.
SequenceLemmaReport sequence_lemma_check(const SequenceLemmaCase& c);

}  // namespace expheat
