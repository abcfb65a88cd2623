#include "expheat/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "expheat/error.hpp"
#include "expheat/nonlinearity.hpp"

namespace expheat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> hat_weights(const std::vector<double>& r) {
  std::vector<double> w(r.size(), 0.0);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = r[i];
    const double b = r[i + 1];
    const double h = b - a;
    w[i] += kTwoPi * h * (2.0 * a + b) / 6.0;
    w[i + 1] += kTwoPi * h * (a + 2.0 * b) / 6.0;
  }
  return w;
}

Tridiagonal finite_volume_laplacian(const std::vector<double>& r) {
  const std::size_t m = r.size();
  Tridiagonal op;
  op.lower.assign(m, 0.0);
  op.diag.assign(m, 0.0);
  op.upper.assign(m, 0.0);

  // Origin: dual cell [0, r_1/2] with measure r_{1/2}^2 / 2.
  {
    const double rp = 0.5 * r[1];
    const double mass = 0.5 * rp * rp;
    op.upper[0] = rp / (r[1] * mass);
    op.diag[0] = -op.upper[0];
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double rm = 0.5 * (r[i - 1] + r[i]);
    const double rp = 0.5 * (r[i] + r[i + 1]);
    const double mass = 0.5 * (rp * rp - rm * rm);
    op.lower[i] = rm / ((r[i] - r[i - 1]) * mass);
    op.upper[i] = rp / ((r[i + 1] - r[i]) * mass);
    op.diag[i] = -(op.lower[i] + op.upper[i]);
  }
  return op;
}

std::array<double, 3> outer_quadratic_fit(const std::vector<double>& r) {
  const std::size_t n = r.size() - 1;
  const double x0 = r[n - 2];
  const double x1 = r[n - 1];
  const double x2 = r[n];
  const double d0 = (x0 - x1) * (x0 - x2);
  const double d1 = (x1 - x0) * (x1 - x2);
  const double d2 = (x2 - x0) * (x2 - x1);
  // Second derivative plus first derivative over r of the Lagrange basis.
  return {2.0 / d0 + ((x2 - x1) / d0) / x2,
          2.0 / d1 + ((x2 - x0) / d1) / x2,
          2.0 / d2 + ((x2 - x0) + (x2 - x1)) / d2 / x2};
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, DomainKind kind,
                       double grading)
    : nodes_(std::move(nodes)), kind_(kind), grading_(grading) {
  weights_ = hat_weights(nodes_);
  laplacian_ = finite_volume_laplacian(nodes_);
  if (nodes_.size() >= 3) boundary_stencil_ = outer_quadratic_fit(nodes_);
}

std::shared_ptr<const RadialGrid> RadialGrid::build(std::size_t n,
                                                    double grading,
                                                    DomainKind kind,
                                                    double radius) {
  if (n < 8) {
    throw InvalidArgument("build_grid: node count n must be >= 8, got " +
                          std::to_string(n));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("build_grid: radius must be positive");
  }
  if (!(grading > 0.0) || !std::isfinite(grading)) {
    throw InvalidArgument("build_grid: grading exponent must be positive");
  }
  if (kind == DomainKind::UnitDisc && radius != 1.0) {
    throw InvalidArgument("build_grid: the unit disc has radius 1");
  }
  std::vector<double> r(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    r[i] = radius * std::pow(static_cast<double>(i) / static_cast<double>(n),
                             grading);
  }
  r[0] = 0.0;
  r[n] = radius;
  return std::shared_ptr<const RadialGrid>(
      new RadialGrid(std::move(r), kind, grading));
}

std::shared_ptr<const RadialGrid> RadialGrid::build(const GridSpec& spec) {
  return build(spec.n, spec.grading, spec.kind, spec.radius);
}

GridSpec RadialGrid::spec() const {
  return GridSpec{intervals(), grading_, kind_, radius()};
}

std::shared_ptr<const RadialGrid> RadialGrid::truncated(double r_cut) const {
  const auto last = std::upper_bound(nodes_.begin(), nodes_.end(), r_cut);
  const auto count = static_cast<std::size_t>(last - nodes_.begin());
  if (count < 3) {
    throw InvalidArgument("truncated grid needs at least 3 nodes below r = " +
                          std::to_string(r_cut));
  }
  std::vector<double> r(nodes_.begin(), nodes_.begin() + count);
  return std::shared_ptr<const RadialGrid>(
      new RadialGrid(std::move(r), kind_, grading_));
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("RadialField: null grid");
  if (values_.size() != grid_->size()) {
    throw InvalidArgument("RadialField: " + std::to_string(values_.size()) +
                          " values for " + std::to_string(grid_->size()) +
                          " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("RadialField: non-finite value at node " +
                            std::to_string(i));
    }
  }
}

RadialField RadialField::sample(GridPtr grid,
                                const std::function<double(double)>& profile) {
  std::vector<double> v;
  v.reserve(grid->size());
  for (double r : grid->nodes()) v.push_back(profile(r));
  return RadialField(std::move(grid), std::move(v));
}

RadialField RadialField::zeros(GridPtr grid) {
  const std::size_t m = grid->size();
  return RadialField(std::move(grid), std::vector<double>(m, 0.0));
}

RadialField RadialField::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return RadialField(grid_, std::move(v));
}

RadialField RadialField::restricted(double r_cut) const {
  auto sub = grid_->truncated(r_cut);
  std::vector<double> v(values_.begin(), values_.begin() + sub->size());
  return RadialField(std::move(sub), std::move(v));
}

double integrate(const RadialField& field) {
  const auto w = field.grid().weights();
  const auto u = field.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i];
  return sum;
}

double lp_norm(const RadialField& field, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: exponent must be >= 1");
  const auto u = field.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
  }
  const auto w = field.grid().weights();
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i] * u[i];
    return std::sqrt(sum);
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += w[i] * std::pow(std::abs(u[i]), p);
  }
  return std::pow(sum, 1.0 / p);
}

double l2_distance(const RadialField& a, const RadialField& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("l2_distance: fields live on different grids");
  }
  const auto w = a.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += w[i] * d * d;
  }
  return std::sqrt(sum);
}

double h1_seminorm(const RadialField& field) {
  const auto r = field.grid().nodes();
  const auto u = field.values();
  if (r.size() < 3) throw InvalidArgument("h1_seminorm: need >= 3 nodes");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double h = r[i + 1] - r[i];
    const double du = u[i + 1] - u[i];
    sum += std::numbers::pi * (r[i] + r[i + 1]) * du * du / h;
  }
  return std::sqrt(sum);
}

RadialField discrete_laplacian(const RadialField& field) {
  const auto& grid = field.grid();
  if (grid.size() < 3) {
    throw InvalidArgument("discrete_laplacian: need >= 3 nodes");
  }
  const auto& op = grid.laplacian();
  const auto u = field.values();
  const std::size_t n = u.size() - 1;
  std::vector<double> out(u.size(), 0.0);
  out[0] = op.diag[0] * u[0] + op.upper[0] * u[1];
  for (std::size_t i = 1; i < n; ++i) {
    out[i] = op.lower[i] * u[i - 1] + op.diag[i] * u[i] + op.upper[i] * u[i + 1];
  }
  const auto& c = grid.boundary_stencil();
  out[n] = c[0] * u[n - 2] + c[1] * u[n - 1] + c[2] * u[n];
  return RadialField(field.grid_ptr(), std::move(out));
}

EnergySnapshot energy(const RadialField& field, const Nonlinearity& nl) {
  EnergySnapshot s;
  const auto w = field.grid().weights();
  const auto u = field.values();
  double l2sq = 0.0;
  double potential = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    l2sq += w[i] * u[i] * u[i];
    potential += w[i] * nl.primitive(u[i]);
    s.linf = std::max(s.linf, std::abs(u[i]));
  }
  s.l2 = std::sqrt(l2sq);
  s.h1_semi = h1_seminorm(field);
  s.potential = potential;
  s.energy_j = 0.5 * s.h1_semi * s.h1_semi - s.potential;
  return s;
}

}  // namespace expheat
