#include "infoineq/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "infoineq/errors.hpp"

namespace infoineq {

namespace {

double guarded(const std::function<double(const std::vector<double>&)>& fn, const std::vector<double>& x) {
  const double v = fn(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn, std::vector<double> start,
                          const std::vector<double>& scale, int max_iterations, double tolerance) {
  const std::size_t n = start.size();
  if (n == 0 || scale.size() != n) throw InvalidArgument("simplex: start and scale must have the same nonzero size");
  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scale[i];
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = guarded(fn, pts[i]);

  std::vector<std::size_t> order(n + 1);
  SimplexResult out;
  auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + t * (w[i] - c[i]);
    return p;
  };

  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    if (std::isfinite(vals[worst]) && std::fabs(vals[worst] - vals[best]) <= tolerance) {
      out.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t c = 0; c < n; ++c) centroid[c] += pts[i][c] / static_cast<double>(n);
    }
    const auto reflected = point(centroid, pts[worst], -1.0);
    const double fr = guarded(fn, reflected);
    if (fr < vals[best]) {
      const auto expanded = point(centroid, pts[worst], -2.0);
      const double fe = guarded(fn, expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const auto contracted = point(centroid, outside ? reflected : pts[worst], 0.5);
    const double fc = guarded(fn, contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = point(pts[best], pts[i], 0.5);
      vals[i] = guarded(fn, pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  out.x = pts[static_cast<std::size_t>(it - vals.begin())];
  out.value = *it;
  return out;
}

}  // namespace infoineq
