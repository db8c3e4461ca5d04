#include "infoineq/differences.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "infoineq/errors.hpp"

namespace infoineq {

namespace {

// Second-order accurate central stencils: offsets in units of h and weights,
// the result scaled by 1 / h^order.
struct Stencil {
  std::vector<double> offsets;
  std::vector<double> weights;
};

const Stencil& stencil(int order) {
  static const std::array<Stencil, 5> table = {{
      {{0.0}, {1.0}},
      {{-1.0, 1.0}, {-0.5, 0.5}},
      {{-1.0, 0.0, 1.0}, {1.0, -2.0, 1.0}},
      {{-2.0, -1.0, 1.0, 2.0}, {-0.5, 1.0, -1.0, 0.5}},
      {{-2.0, -1.0, 0.0, 1.0, 2.0}, {1.0, -4.0, 6.0, -4.0, 1.0}},
  }};
  if (order < 0 || order > 4) throw InvalidArgument("derivative order must be in 0..4");
  return table[static_cast<std::size_t>(order)];
}

double max_offset(int order) { return order <= 2 ? (order == 0 ? 0.0 : 1.0) : 2.0; }

double central(const std::function<double(double)>& fn, double theta, int order, double h) {
  const Stencil& s = stencil(order);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.offsets.size(); ++i) acc += s.weights[i] * fn(theta + s.offsets[i] * h);
  return acc / std::pow(h, order);
}

void check_distinct(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw InvalidArgument(std::string(what) + ": non-finite node");
    for (std::size_t j = 0; j < i; ++j) {
      if (v[i] == v[j]) throw InvalidArgument(std::string(what) + ": duplicate nodes");
    }
  }
}

}  // namespace

double default_step(double theta, int order) {
  static constexpr std::array<double, 5> base = {0.0, 1e-4, 1e-3, 5e-3, 1e-2};
  if (order < 1 || order > 4) throw InvalidArgument("derivative order must be in 1..4");
  return base[static_cast<std::size_t>(order)] * std::max(1.0, std::fabs(theta));
}

DerivativeResult derivative(const std::function<double(double)>& fn, double theta, int order, double step,
                            Interval domain) {
  if (order < 1 || order > 4) throw InvalidArgument("derivative order must be in 1..4");
  const double h = step > 0.0 ? step : default_step(theta, order);
  if (!(h > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(theta)))) {
    throw InvalidArgument("derivative step underflow");
  }
  const double reach = max_offset(order) * h;
  if (!domain.contains_open(theta - reach) || !domain.contains_open(theta + reach)) {
    throw DomainError("derivative stencil leaves the parameter domain");
  }
  const double coarse = central(fn, theta, order, h);
  const double fine = central(fn, theta, order, 0.5 * h);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  return {extrapolated, std::fabs(extrapolated - fine)};
}

DerivativeResult mixed_partial(const std::function<double(ParamView)>& fn, ParamView theta, const MultiIndex& index,
                               double step, const std::vector<Interval>& domain) {
  if (index.size() != theta.size()) throw InvalidArgument("multi-index length differs from parameter dimension");
  for (int a : index) {
    if (a < 0 || a > 4) throw InvalidArgument("per-coordinate derivative order must be in 0..4");
  }
  std::vector<double> steps(theta.size());
  for (std::size_t c = 0; c < theta.size(); ++c) {
    if (index[c] == 0) continue;
    steps[c] = step > 0.0 ? step : default_step(theta[c], std::max(2, index[c]));
    const double reach = max_offset(index[c]) * steps[c];
    if (!domain.empty() && (!domain[c].contains_open(theta[c] - reach) || !domain[c].contains_open(theta[c] + reach))) {
      throw DomainError("mixed-partial stencil leaves the parameter domain");
    }
  }

  auto tensor = [&](double scale) {
    std::vector<double> point(theta.begin(), theta.end());
    // Recursive tensor product over coordinates.
    std::function<double(std::size_t)> walk = [&](std::size_t c) -> double {
      if (c == theta.size()) return fn(ParamView(point.data(), point.size()));
      if (index[c] == 0) return walk(c + 1);
      const Stencil& s = stencil(index[c]);
      const double h = steps[c] * scale;
      double acc = 0.0;
      for (std::size_t i = 0; i < s.offsets.size(); ++i) {
        point[c] = theta[c] + s.offsets[i] * h;
        acc += s.weights[i] * walk(c + 1);
      }
      point[c] = theta[c];
      return acc / std::pow(h, index[c]);
    };
    return walk(0);
  };

  const double coarse = tensor(1.0);
  const double fine = tensor(0.5);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  return {extrapolated, std::fabs(extrapolated - fine)};
}

NodeSet::NodeSet(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("a node set needs at least two nodes");
  check_distinct(nodes_, "node set");
}

DividedDifferenceTable divided_difference_from_values(const NodeSet& nodes, const std::vector<double>& values) {
  if (values.size() != nodes.values().size()) throw InvalidArgument("one value per node required");
  DividedDifferenceTable t;
  t.nodes = nodes.values();
  t.rows.push_back(values);
  const int k = nodes.k();
  for (int j = 1; j <= k; ++j) {
    const auto& prev = t.rows.back();
    std::vector<double> row(static_cast<std::size_t>(k - j + 1));
    for (int nu = 0; nu + j <= k; ++nu) {
      row[static_cast<std::size_t>(nu)] = (prev[static_cast<std::size_t>(nu + 1)] - prev[static_cast<std::size_t>(nu)]) /
                                          (nodes[static_cast<std::size_t>(nu + j)] - nodes[static_cast<std::size_t>(nu)]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

DividedDifferenceTable divided_difference(const std::function<double(double)>& h, const NodeSet& nodes) {
  std::vector<double> values;
  values.reserve(nodes.values().size());
  for (double v : nodes.values()) values.push_back(h(v));
  return divided_difference_from_values(nodes, values);
}

std::vector<double> lagrange_weights(const NodeSet& nodes, int order) {
  if (order < 0 || order > nodes.k()) throw InvalidArgument("divided-difference order exceeds node count");
  std::vector<double> w(static_cast<std::size_t>(order + 1), 1.0);
  for (int j = 0; j <= order; ++j) {
    double prod = 1.0;
    for (int l = 0; l <= order; ++l) {
      if (l != j) prod *= nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(l)];
    }
    w[static_cast<std::size_t>(j)] = 1.0 / prod;
  }
  return w;
}

double lagrange_divided_difference(const NodeSet& nodes, const std::vector<double>& values, int order) {
  const auto w = lagrange_weights(nodes, order);
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * values.at(j);
  return acc;
}

DividedDifferenceTable multiparam_divided_difference(const std::function<double(ParamView)>& h,
                                                     const std::vector<ParamVector>& nodes, std::size_t coordinate) {
  if (nodes.size() < 2) throw InvalidArgument("a node set needs at least two nodes");
  const std::size_t p = nodes.front().size();
  if (coordinate >= p) throw InvalidArgument("coordinate out of range");
  std::vector<double> coords;
  for (const auto& n : nodes) {
    if (n.size() != p) throw InvalidArgument("nodes differ in dimension");
    coords.push_back(n[coordinate]);
  }
  check_distinct(coords, "coordinate nodes");
  const NodeSet set(coords);
  ParamVector point = nodes.front();
  std::vector<double> values;
  for (double c : coords) {
    point[coordinate] = c;
    values.push_back(h(ParamView(point.data(), point.size())));
  }
  return divided_difference_from_values(set, values);
}

}  // namespace infoineq
