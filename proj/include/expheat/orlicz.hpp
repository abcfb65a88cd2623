#pragma once

// Orlicz space tools for phi(s) = e^{s^2} - 1 on radial fields: the
// Luxemburg norm, the L^p embedding constant, the Moser-Trudinger functional
// and its sharpness probe on the Moser family, and exp-integrability with a
// refinement certificate.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "expheat/radial.hpp"

namespace expheat {

struct LuxemburgQuery {
  RadialField field;
  std::optional<double> sub_radius;  // restrict to |x| < sub_radius
  double rel_tol = 1e-10;
  // Drop node r = 0 from the quadrature. Used for singular profiles, whose
  // origin value is a truncation cap rather than a sample.
  bool skip_origin = false;
};

/// int phi(|u| / lambda) dx on the query's domain.
double orlicz_modular(const LuxemburgQuery& q, double lambda);

/// inf { lambda > 0 : int (e^{(u/lambda)^2} - 1) dx <= 1 } by bisection on
/// ln lambda over [1e-8 ||u||_inf, 1e3 ||u||_inf].
/// Throws BracketError when the modular exceeds 1 at the largest probe.
double luxemburg_norm(const LuxemburgQuery& q);

struct EmbeddingReport {
  double lp = 0.0;
  double luxemburg = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // Gamma(p/2 + 1)^{1/p}
  bool holds = false;  // ratio <= bound (1 + 1e-6)
};

/// ||u||_{L^p} / ||u||_L against Gamma(p/2+1)^{1/p}. Rejects the zero field.
EmbeddingReport embedding_check(const RadialField& field, double p);

/// int (e^{alpha u^2} - 1)^q dx. Throws OverflowGuardError when alpha u^2
/// exceeds max_exponent anywhere on the quadrature.
double exp_integral(const RadialField& field, double alpha, double q = 1.0,
                    bool skip_origin = false, double max_exponent = 169.0);

/// int (e^{alpha u^2} - 1) dx.
double mt_functional(const RadialField& field, double alpha);

/// Moser profile: sqrt(ln k / 2 pi) on r <= 1/k, ln(1/r) / sqrt(2 pi ln k)
/// on 1/k < r <= 1, zero outside. ||grad u_k||_{L2} = 1.
double moser_profile(double r, double k);
RadialField moser_field(GridPtr grid, double k);

struct SharpnessRow {
  double alpha = 0.0;
  double k = 0.0;
  double seminorm_raw = 0.0;  // discrete ||grad u_k|| before normalization
  double l2_squared = 0.0;
  double functional = 0.0;
  double ratio = 0.0;  // functional / l2_squared
};

/// Ratio table over (alpha, k); each u_k is rescaled to unit discrete
/// gradient norm before evaluation. Rows are ordered alpha-major.
std::vector<SharpnessRow> mt_sharpness_scan(std::span<const double> alphas,
                                            std::span<const double> ks,
                                            const GridSpec& grid);

struct IntegrabilityReport {
  double value_n = 0.0;
  double value_2n = 0.0;
  double gap = 0.0;  // |value_2n - value_n| / |value_2n|, 0 when both vanish
};

/// exp_integral of `profile` sampled on `grid` and on the same grid with
/// twice the intervals.
IntegrabilityReport exp_integrability(
    const std::function<double(double)>& profile, const GridSpec& grid,
    double alpha, double q, bool skip_origin = false);

}  // namespace expheat
