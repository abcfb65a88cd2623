#pragma once

// Time integration of u_t = Delta u + f(u) on a radial grid with a
// homogeneous Dirichlet condition at r = R.
//
// Diffusion is treated with the theta scheme on the finite-volume Laplacian;
// the source is explicit. SourceScheme::Euler uses f(u^n) (first order in the
// source); SourceScheme::Heun adds a corrector with (f(u^n) + f(u*)) / 2 and
// is the default. Both need one tridiagonal solve per stage.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expheat/nonlinearity.hpp"
#include "expheat/radial.hpp"

namespace expheat {

enum class SourceScheme { Euler, Heun };

std::string to_string(SourceScheme s);

struct SolverConfig {
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double theta = 0.5;
  double cfl_safety = 0.2;  // bound on dt * sup |f'(u)|
  double t_end = 1.0;
  double u_max_blowup = 12.0;
  std::size_t snapshot_stride = 5;
  SourceScheme scheme = SourceScheme::Heun;
  // Number of leading steps taken with theta = 1 (damps the undamped
  // high-frequency mode of Crank-Nicolson for rough data).
  std::size_t implicit_startup_steps = 0;
  bool store_fields = false;
  std::size_t max_steps = 20'000'000;

  /// Throws InvalidArgument on violated invariants.
  void validate(const Nonlinearity& nl) const;
};

enum class Outcome { CompletedToTend, BlowUp };

std::string to_string(Outcome o);

struct EvolutionRecord {
  std::vector<double> times;
  std::vector<EnergySnapshot> snapshots;
  std::vector<double> dissipation_cum;  // int_0^t ||(u^{n+1}-u^n)/dt||^2
  std::vector<double> v_functional;     // V(t) = 0.5 int_0^t ||u||^2
  std::vector<RadialField> fields;      // one per snapshot when stored
  Outcome outcome = Outcome::CompletedToTend;
  std::optional<double> t_detect;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  double smallest_dt = 0.0;
  Nonlinearity nl;
  SolverConfig config;

  bool has_fields() const { return !fields.empty(); }
};

/// e^{-x} I_0(x) for x >= 0.
double scaled_bessel_i0(double x);

/// Convolution with the planar heat kernel (4 pi t)^{-1} e^{-|x|^2 / 4t},
/// evaluated by quadrature over the grid. O(n^2); used for validation.
RadialField heat_propagate_exact(const RadialField& field, double t);

/// One step: (I - theta dt L) u+ = (I + (1-theta) dt L) u + dt S, with
/// S = f(u) or the Heun average, and u+(R) = 0.
RadialField step_imex(const RadialField& u, double dt, const Nonlinearity& nl,
                      const SolverConfig& cfg);

/// Adaptive evolution to t_end or blow-up detection.
///
/// dt is halved while dt * sup|f'(u)| > cfl_safety or a step changes
/// ||u||_inf by more than 10%, never below dt_min; otherwise it grows by 1.2
/// up to dt_init. BlowUp is declared once ||u||_inf >= u_max_blowup while
/// dt == dt_min and ||u||_inf rose over each of the last 10 steps.
/// Throws SolverError on a non-finite state or an unguarded overflow.
EvolutionRecord evolve(const RadialField& u0, const Nonlinearity& nl,
                       const SolverConfig& cfg);

}  // namespace expheat
