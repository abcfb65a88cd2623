#include "expheat/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "expheat/error.hpp"

namespace expheat {

std::vector<double> solve_tridiagonal(const Tridiagonal& a,
                                      std::span<const double> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n || a.lower.size() != n || a.upper.size() != n) {
    throw InvalidArgument("solve_tridiagonal: size mismatch");
  }
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n, 0.0);
  double pivot = a.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = a.diag[i] - a.lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SolverError("solve_tridiagonal: bad pivot at row " +
                        std::to_string(i));
    }
    c[i] = a.upper[i] / pivot;
    x[i] = (rhs[i] - (i > 0 ? a.lower[i] * x[i - 1] : 0.0)) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace expheat
