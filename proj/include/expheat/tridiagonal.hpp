#pragma once

#include <span>
#include <vector>

#include "expheat/radial.hpp"

namespace expheat {

/// Thomas algorithm without pivoting. Throws SolverError on a zero or
/// non-finite pivot.
std::vector<double> solve_tridiagonal(const Tridiagonal& a,
                                      std::span<const double> rhs);

}  // namespace expheat
