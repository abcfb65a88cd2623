#include "expheat/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "expheat/error.hpp"

namespace expheat {

namespace {

void require_fields(const EvolutionRecord& rec, const char* who) {
  if (!rec.has_fields() || rec.fields.size() != rec.times.size()) {
    throw InvalidArgument(std::string(who) +
                          ": record does not carry full-field snapshots");
  }
}

RadialField truncate_above(const RadialField& u, double c) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(u[i] - c, 0.0);
  return RadialField(u.grid_ptr(), std::move(v));
}

}  // namespace

DissipationReport dissipation_check(const EvolutionRecord& rec) {
  require_fields(rec, "dissipation_check");
  DissipationReport rep;
  std::vector<double> j(rec.fields.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    j[k] = energy(rec.fields[k], rec.nl).energy_j;
  }
  const auto& d = rec.dissipation_cum;
  for (std::size_t k = 0; k < j.size(); ++k) {
    rep.max_cumulative_residual =
        std::max(rep.max_cumulative_residual, std::abs(j[k] - j[0] + d[k]));
    if (k == 0) continue;
    const double r = std::abs(j[k] - j[k - 1] + d[k] - d[k - 1]);
    rep.interval_residuals.push_back(r);
    rep.max_interval_residual = std::max(rep.max_interval_residual, r);
    if (j[k] > j[k - 1]) rep.j_nonincreasing = false;
  }
  return rep;
}

DeGiorgiReport degiorgi_diagnostic(const EvolutionRecord& rec,
                                   const DeGiorgiParams& p) {
  if (!(p.M > 0.0) || !(p.t0 > 0.0) || !(p.alpha_dg > 2.0)) {
    throw InvalidArgument(
        "degiorgi_diagnostic: need M > 0, t0 > 0 and alpha_dg > 2");
  }
  require_fields(rec, "degiorgi_diagnostic");
  if (!(rec.times.back() > p.t0)) {
    throw InvalidArgument("degiorgi_diagnostic: t_end must exceed t0");
  }

  const double u0_sq = std::pow(lp_norm(rec.fields.front(), 2.0), 2);
  DeGiorgiReport rep;
  rep.C = std::pow(2.0, p.alpha_dg + 1.0);
  rep.A = std::pow(2.0, 0.5 * p.alpha_dg + 4.0) * u0_sq /
          (std::pow(p.M, p.alpha_dg) * p.t0);

  for (std::size_t k = 0; k <= p.k_max; ++k) {
    const double frac = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
    const double c = p.M * frac;
    const double start = p.t0 * frac;
    rep.levels.push_back(c);
    rep.starts.push_back(start);

    double sup_l2 = 0.0;
    double integral = 0.0;
    double prev_t = 0.0;
    double prev_g = 0.0;
    bool first = true;
    for (std::size_t s = 0; s < rec.times.size(); ++s) {
      if (rec.times[s] < start) continue;
      const RadialField uk = truncate_above(rec.fields[s], c);
      const double l2 = lp_norm(uk, 2.0);
      const double g = std::pow(h1_seminorm(uk), 2);
      sup_l2 = std::max(sup_l2, l2 * l2);
      if (!first) integral += 0.5 * (rec.times[s] - prev_t) * (g + prev_g);
      prev_t = rec.times[s];
      prev_g = g;
      first = false;
    }
    rep.U.push_back(sup_l2 + 2.0 * integral);
  }

  for (std::size_t k = 1; k <= p.k_max; ++k) {
    const double bound = rep.A * std::pow(rep.C, static_cast<double>(k) - 1.0) *
                         std::pow(rep.U[k - 1], 0.5 * p.alpha_dg);
    const bool ok = rep.U[k] <= bound;
    rep.recursion_holds.push_back(ok);
    rep.all_recursion_holds = rep.all_recursion_holds && ok;
    if (rep.U[k] > rep.U[k - 1]) rep.nonincreasing = false;
  }
  rep.converged = rep.U.back() < 1e-6;
  return rep;
}

ConvexityReport convexity_diagnostic(const EvolutionRecord& rec,
                                     double alpha) {
  if (!(alpha > 0.0)) {
    throw InvalidArgument("convexity_diagnostic: alpha must be > 0");
  }
  const std::size_t m = rec.times.size();
  if (m < 3) {
    throw InvalidArgument("convexity_diagnostic: need at least 3 snapshots");
  }
  const auto& t = rec.times;
  std::vector<double> vp(m);
  for (std::size_t k = 0; k < m; ++k) {
    vp[k] = 0.5 * rec.snapshots[k].l2 * rec.snapshots[k].l2;
  }
  // Second-order three-point derivative on a nonuniform mesh; one-sided at
  // both ends.
  auto derivative = [&](std::size_t a, std::size_t b, std::size_t c,
                        double at) {
    const double ta = t[a], tb = t[b], tc = t[c];
    return vp[a] * (2 * at - tb - tc) / ((ta - tb) * (ta - tc)) +
           vp[b] * (2 * at - ta - tc) / ((tb - ta) * (tb - tc)) +
           vp[c] * (2 * at - ta - tb) / ((tc - ta) * (tc - tb));
  };

  ConvexityReport rep;
  rep.times = t;
  for (std::size_t k = 0; k < m; ++k) {
    double vpp;
    if (k == 0) {
      vpp = derivative(0, 1, 2, t[0]);
    } else if (k + 1 == m) {
      vpp = derivative(m - 3, m - 2, m - 1, t[m - 1]);
    } else {
      vpp = derivative(k - 1, k, k + 1, t[k]);
    }
    const double v = rec.v_functional[k];
    const double lhs = v * vpp;
    const double rhs = (1.0 + alpha) * vp[k] * vp[k];
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.holds.push_back(v > 0.0 && vp[k] > 0.0 && lhs >= rhs);
  }
  for (std::size_t k = m; k-- > 0;) {
    if (!rep.holds[k]) break;
    rep.t_alpha = t[k];
  }
  rep.claim_dissipation = rec.dissipation_cum.back();
  rep.claim_positive = rep.claim_dissipation > 0.0;
  return rep;
}

double sequence_lemma_threshold(double C, double beta) {
  if (!(C > 1.0) || !(beta > 1.0)) {
    throw InvalidArgument("sequence_lemma_threshold: need C > 1 and beta > 1");
  }
  using Real = boost::multiprecision::cpp_bin_float_50;
  const Real bm1 = Real(beta) - 1;
  const Real exact = pow(Real(C), -1 / (bm1 * bm1));
  double d = static_cast<double>(exact);
  if (Real(d) > exact) d = std::nextafter(d, 0.0);
  return d;
}

SequenceLemmaReport sequence_lemma_check(const SequenceLemmaCase& c) {
  if (!(c.C > 1.0) || !(c.beta > 1.0)) {
    throw InvalidArgument("sequence_lemma_check: need C > 1 and beta > 1");
  }
  if (!(c.x0 >= 0.0)) {
    throw InvalidArgument("sequence_lemma_check: x0 must be >= 0");
  }
  using Real = boost::multiprecision::cpp_bin_float_50;
  const double bm1 = c.beta - 1.0;
  const Real C = c.C;
  const Real beta = c.beta;
  const Real sq = Real(bm1) * Real(bm1);

  SequenceLemmaReport rep;
  rep.threshold = sequence_lemma_threshold(c.C, c.beta);
  rep.hypothesis_holds = c.x0 <= rep.threshold;
  rep.bound_holds = true;

  Real x = c.x0;
  for (std::size_t n = 0;; ++n) {
    const double xd = static_cast<double>(x);
    const Real bound = pow(C, -(1 + Real(n) * Real(bm1)) / sq);
    rep.trace.push_back(xd);
    rep.bound_trace.push_back(static_cast<double>(bound));
    if (x > bound * Real(1 + 1e-12)) rep.bound_holds = false;
    if (!std::isfinite(xd) || xd > 1e300) {
      rep.diverged = true;
      break;
    }
    if (xd < 1e-12) {
      rep.converged_to_zero = true;
      break;
    }
    if (n >= c.n_max) break;
    if (c.update) {
      x = c.update(n, xd);
    } else {
      x = pow(C, Real(n)) * pow(x, beta);
    }
  }
  return rep;
}

}  // namespace expheat
