#pragma once

#include <functional>
#include <vector>

namespace infoineq {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization. Non-finite objective values count as +inf, so
/// infeasible points are simply never accepted. `scale` sets the initial
/// simplex edge per coordinate.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn, std::vector<double> start,
                          const std::vector<double>& scale, int max_iterations = 200, double tolerance = 1e-8);

}  // namespace infoineq
