#include "expheat/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "expheat/error.hpp"

namespace expheat {

namespace {

constexpr double kExpLimit = 700.0;

RadialField query_domain(const LuxemburgQuery& q) {
  if (!q.sub_radius) return q.field;
  const double r = *q.sub_radius;
  if (!(r > 0.0) || r > q.field.grid().radius()) {
    throw InvalidArgument("luxemburg_norm: sub_radius must lie in (0, R]");
  }
  return q.field.restricted(r);
}

double modular_on(const RadialField& field, double lambda, bool skip_origin) {
  const auto w = field.grid().weights();
  const auto u = field.values();
  double sum = 0.0;
  for (std::size_t i = skip_origin ? 1 : 0; i < u.size(); ++i) {
    const double s = u[i] / lambda;
    const double e = s * s;
    if (e > kExpLimit) return std::numeric_limits<double>::infinity();
    sum += w[i] * std::expm1(e);
  }
  return sum;
}

}  // namespace

double orlicz_modular(const LuxemburgQuery& q, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("orlicz_modular: lambda <= 0");
  return modular_on(query_domain(q), lambda, q.skip_origin);
}

double luxemburg_norm(const LuxemburgQuery& q) {
  if (!(q.rel_tol > 0.0)) {
    throw InvalidArgument("luxemburg_norm: rel_tol must be positive");
  }
  const RadialField field = query_domain(q);
  const auto u = field.values();
  double sup = 0.0;
  for (std::size_t i = q.skip_origin ? 1 : 0; i < u.size(); ++i) {
    sup = std::max(sup, std::abs(u[i]));
  }
  if (sup == 0.0) return 0.0;

  double log_lo = std::log(1e-8 * sup);
  double log_hi = std::log(1e3 * sup);
  if (modular_on(field, std::exp(log_hi), q.skip_origin) > 1.0) {
    throw BracketError(
        "luxemburg_norm: modular exceeds 1 at the largest probe lambda");
  }
  if (modular_on(field, std::exp(log_lo), q.skip_origin) <= 1.0) {
    throw BracketError(
        "luxemburg_norm: modular is below 1 at the smallest probe lambda");
  }
  // The modular is strictly decreasing in lambda; keep lo infeasible and hi
  // feasible.
  const double width = 0.1 * q.rel_tol;
  for (int it = 0; it < 200 && log_hi - log_lo > width; ++it) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (modular_on(field, std::exp(mid), q.skip_origin) <= 1.0) {
      log_hi = mid;
    } else {
      log_lo = mid;
    }
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

EmbeddingReport embedding_check(const RadialField& field, double p) {
  if (!(p >= 2.0)) throw InvalidArgument("embedding_check: p must be >= 2");
  EmbeddingReport rep;
  rep.luxemburg = luxemburg_norm(LuxemburgQuery{field, std::nullopt});
  if (rep.luxemburg == 0.0) {
    throw InvalidArgument("embedding_check: zero field, ratio undefined");
  }
  rep.lp = lp_norm(field, p);
  rep.ratio = rep.lp / rep.luxemburg;
  rep.bound = std::pow(std::tgamma(0.5 * p + 1.0), 1.0 / p);
  rep.holds = rep.ratio <= rep.bound * (1.0 + 1e-6);
  return rep;
}

double exp_integral(const RadialField& field, double alpha, double q,
                    bool skip_origin, double max_exponent) {
  if (!(alpha > 0.0)) throw InvalidArgument("exp_integral: alpha must be > 0");
  if (!(q >= 1.0)) throw InvalidArgument("exp_integral: q must be >= 1");
  const auto w = field.grid().weights();
  const auto u = field.values();
  double sum = 0.0;
  for (std::size_t i = skip_origin ? 1 : 0; i < u.size(); ++i) {
    const double e = alpha * u[i] * u[i];
    if (e > max_exponent) {
      throw OverflowGuardError("exp_integral: alpha u^2 above the guard", u[i]);
    }
    const double g = std::expm1(e);
    sum += w[i] * (q == 1.0 ? g : std::pow(g, q));
  }
  return sum;
}

double mt_functional(const RadialField& field, double alpha) {
  return exp_integral(field, alpha, 1.0);
}

double moser_profile(double r, double k) {
  const double log_k = std::log(k);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (r <= 1.0 / k) return std::sqrt(log_k / two_pi);
  if (r <= 1.0) return std::log(1.0 / r) / std::sqrt(two_pi * log_k);
  return 0.0;
}

RadialField moser_field(GridPtr grid, double k) {
  if (!(k >= 2.0)) throw InvalidArgument("moser_field: k must be >= 2");
  return RadialField::sample(std::move(grid),
                             [k](double r) { return moser_profile(r, k); });
}

std::vector<SharpnessRow> mt_sharpness_scan(std::span<const double> alphas,
                                            std::span<const double> ks,
                                            const GridSpec& spec) {
  const GridPtr grid = RadialGrid::build(spec);
  std::vector<RadialField> normalized;
  std::vector<double> raw;
  normalized.reserve(ks.size());
  for (double k : ks) {
    const RadialField u = moser_field(grid, k);
    const double s = h1_seminorm(u);
    raw.push_back(s);
    normalized.push_back(u.scaled(1.0 / s));
  }
  std::vector<SharpnessRow> rows;
  rows.reserve(alphas.size() * ks.size());
  for (double alpha : alphas) {
    for (std::size_t j = 0; j < ks.size(); ++j) {
      SharpnessRow row;
      row.alpha = alpha;
      row.k = ks[j];
      row.seminorm_raw = raw[j];
      const double l2 = lp_norm(normalized[j], 2.0);
      row.l2_squared = l2 * l2;
      row.functional = mt_functional(normalized[j], alpha);
      row.ratio = row.functional / row.l2_squared;
      rows.push_back(row);
    }
  }
  return rows;
}

IntegrabilityReport exp_integrability(
    const std::function<double(double)>& profile, const GridSpec& grid,
    double alpha, double q, bool skip_origin) {
  GridSpec fine = grid;
  fine.n = 2 * grid.n;
  const auto coarse_field = RadialField::sample(RadialGrid::build(grid), profile);
  const auto fine_field = RadialField::sample(RadialGrid::build(fine), profile);
  IntegrabilityReport rep;
  rep.value_n = exp_integral(coarse_field, alpha, q, skip_origin);
  rep.value_2n = exp_integral(fine_field, alpha, q, skip_origin);
  const double scale = std::abs(rep.value_2n);
  rep.gap = scale > 0.0 ? std::abs(rep.value_2n - rep.value_n) / scale
                        : std::abs(rep.value_2n - rep.value_n);
  return rep;
}

}  // namespace expheat
