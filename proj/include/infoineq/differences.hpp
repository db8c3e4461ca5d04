#pragma once

#include <functional>
#include <vector>

#include "infoineq/support.hpp"

namespace infoineq {

struct DerivativeResult {
  double value = 0.0;
  double error = 0.0;
};

/// Default step for a central difference of the given order at theta.
double default_step(double theta, int order);

/// Central-difference derivative of order 1..4 with one Richardson level.
/// Every stencil point must lie in the open `domain`. step <= 0 selects
/// default_step.
DerivativeResult derivative(const std::function<double(double)>& fn, double theta, int order, double step = 0.0,
                            Interval domain = {});

/// Mixed partial derivative d^|i| fn / d theta^i by tensor-product central
/// stencils with one Richardson level. `domain` may be empty (unbounded).
DerivativeResult mixed_partial(const std::function<double(ParamView)>& fn, ParamView theta, const MultiIndex& index,
                               double step = 0.0, const std::vector<Interval>& domain = {});

/// Ordered parameter nodes theta^0..theta^k for divided differences.
class NodeSet {
 public:
  /// Throws InvalidArgument when fewer than two nodes are given or two coincide.
  explicit NodeSet(std::vector<double> nodes);

  int k() const { return static_cast<int>(nodes_.size()) - 1; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& values() const { return nodes_; }
  double base() const { return nodes_.front(); }

 private:
  std::vector<double> nodes_;
};

/// Triangular table: row j holds Delta^j h(theta^nu) for nu = 0..k-j.
struct DividedDifferenceTable {
  std::vector<double> nodes;
  std::vector<std::vector<double>> rows;

  int k() const { return static_cast<int>(nodes.size()) - 1; }
  double at(int order, int nu) const { return rows.at(static_cast<std::size_t>(order)).at(static_cast<std::size_t>(nu)); }
  /// Delta^j h(theta^0) over nodes theta^0..theta^j.
  double leading(int order) const { return at(order, 0); }
};

DividedDifferenceTable divided_difference(const std::function<double(double)>& h, const NodeSet& nodes);

/// Table from values already evaluated at the nodes.
DividedDifferenceTable divided_difference_from_values(const NodeSet& nodes, const std::vector<double>& values);

/// Weights w_j with Delta^i h(theta^0) = sum_{j<=i} w_j h(theta^j), i.e.
/// w_j = 1 / prod_{l != j, l <= i} (theta^j - theta^l).
std::vector<double> lagrange_weights(const NodeSet& nodes, int order);

/// Delta^i h(theta^0) evaluated through the Lagrange form.
double lagrange_divided_difference(const NodeSet& nodes, const std::vector<double>& values, int order);

/// Divided differences of a function of a parameter vector along one
/// coordinate. Only `coordinate` varies: the other coordinates stay at
/// nodes[0]; coordinate takes nodes[nu][coordinate] at node nu.
DividedDifferenceTable multiparam_divided_difference(const std::function<double(ParamView)>& h,
                                                     const std::vector<ParamVector>& nodes, std::size_t coordinate);

}  // namespace infoineq
