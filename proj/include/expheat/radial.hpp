#pragma once

// Radial discretization of functions on a disc in R^2.
//
// Nodes r_i = R (i/n)^g, i = 0..n, cluster near the origin for g > 1.
// Quadrature weights integrate the piecewise-linear interpolant of a nodal
// function exactly against 2 pi r dr, so sum_i w_i g(r_i) approximates the
// planar integral of g over the disc of radius R.
//
// The Laplacian is a finite-volume stencil on the dual cells
// [r_{i-1/2}, r_{i+1/2}] with the exact dual-cell measure. It is exact for
// quadratics in r on any grid and reduces to 4 (u_1 - u_0) / r_1^2 at the
// origin.

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace expheat {

struct Nonlinearity;

enum class DomainKind { UnitDisc, TruncatedPlane };

struct GridSpec {
  std::size_t n = 2048;  // number of intervals; the grid has n + 1 nodes
  double grading = 2.0;
  DomainKind kind = DomainKind::TruncatedPlane;
  double radius = 12.0;
};

/// Three-band matrix; lower[0] and upper.back() are unused.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
};

class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> build(std::size_t n, double grading,
                                                 DomainKind kind,
                                                 double radius);
  static std::shared_ptr<const RadialGrid> build(const GridSpec& spec);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t intervals() const { return nodes_.size() - 1; }
  double radius() const { return nodes_.back(); }
  DomainKind kind() const { return kind_; }
  double grading() const { return grading_; }
  GridSpec spec() const;

  /// Finite-volume Laplacian rows for nodes 0..n-1. Row n is left empty:
  /// the outer node is a Dirichlet node.
  const Tridiagonal& laplacian() const { return laplacian_; }

  /// Coefficients of the one-sided quadratic fit giving Delta u at r = R
  /// from nodes n-2, n-1, n.
  const std::array<double, 3>& boundary_stencil() const {
    return boundary_stencil_;
  }

  /// The sub-grid of nodes with r <= r_cut, weighted as a disc whose radius
  /// is the last retained node. Monotone: every weight of the smaller grid is
  /// bounded by the matching weight of the larger one.
  std::shared_ptr<const RadialGrid> truncated(double r_cut) const;

 private:
  RadialGrid(std::vector<double> nodes, DomainKind kind, double grading);

  std::vector<double> nodes_;
  std::vector<double> weights_;
  Tridiagonal laplacian_;
  std::array<double, 3> boundary_stencil_{};
  DomainKind kind_;
  double grading_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Nodal samples of a radial function. Values are always finite.
class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<double> values);

  static RadialField sample(GridPtr grid,
                            const std::function<double(double)>& profile);
  static RadialField zeros(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  RadialField scaled(double c) const;
  /// Restriction to |x| <= r_cut on the truncated grid.
  RadialField restricted(double r_cut) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

struct EnergySnapshot {
  double l2 = 0.0;
  double linf = 0.0;
  double h1_semi = 0.0;
  double energy_j = 0.0;   // 0.5 * h1_semi^2 - potential
  double potential = 0.0;  // integral of F(u)
};

/// sum_i w_i g_i
double integrate(const RadialField& field);

/// (2 pi int |u|^p r dr)^{1/p}; max over nodes for p = infinity.
double lp_norm(const RadialField& field, double p);

/// L2 norm of the difference of two fields on the same grid.
double l2_distance(const RadialField& a, const RadialField& b);

/// ||grad u||_{L2}: the exact Dirichlet integral of the piecewise-linear
/// interpolant, sum over cells of 2 pi r_{i+1/2} (u_{i+1} - u_i)^2 / h_i.
double h1_seminorm(const RadialField& field);

/// u_rr + u_r / r on every node. Node n uses a one-sided quadratic fit.
RadialField discrete_laplacian(const RadialField& field);

/// Norms and J = 0.5 ||grad u||^2 - int F(u).
/// Throws OverflowGuardError when |u| exceeds the guard of `nl`.
EnergySnapshot energy(const RadialField& field, const Nonlinearity& nl);

}  // namespace expheat
