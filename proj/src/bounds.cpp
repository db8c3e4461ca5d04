#include "infoineq/bounds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "infoineq/errors.hpp"
#include "infoineq/simplex.hpp"

namespace infoineq {

namespace {

constexpr double kTightAbsTol = 1e-13;
constexpr double kTightRelTol = 1e-12;
constexpr std::size_t kMaxScores = 64;

struct PointKey {
  std::array<double, 3> c{};
  bool operator==(const PointKey& o) const { return c == o.c; }
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::size_t h = 0;
    for (double v : k.c) h = h * 1000003u ^ std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(v));
    return h;
  }
};

// Evaluates f, the statistics and every score numerator once per sample
// point; the many integrals of one bound revisit the same quadrature nodes.
class Evaluator {
 public:
  struct Row {
    double f = 0.0;
    std::vector<double> t;
    std::vector<double> num;
  };

  Evaluator(const ModelSpec& f, std::vector<const Statistic*> ts, const ScoreSet& scores, ParamView theta)
      : f_(f), ts_(std::move(ts)), scores_(scores), theta_(theta.begin(), theta.end()) {
    if (f.support.dim > 3) throw InvalidArgument("bounds support sample spaces of dimension at most 3");
  }

  const Row& at(Point x) {
    PointKey key;
    std::copy(x.begin(), x.end(), key.c.begin());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Row row;
    row.f = f_.density(x, theta_);
    for (const Statistic* t : ts_) row.t.push_back(t->eval(x));
    row.num.resize(scores_.size());
    for (std::size_t i = 0; i < scores_.size(); ++i) row.num[i] = scores_.numerators[i](x);
    return cache_.emplace(key, std::move(row)).first->second;
  }

 private:
  const ModelSpec& f_;
  std::vector<const Statistic*> ts_;
  const ScoreSet& scores_;
  ParamVector theta_;
  std::unordered_map<PointKey, Row, PointKeyHash> cache_;
};

// Means and covariances of the scores and statistics under f.
struct Moments {
  std::vector<double> score_mean;
  SymMatrix sigma_s;
  std::vector<double> t_mean;
  SymMatrix sigma_t;
  Matrix cross;
  double quad_error = 0.0;
  long truncation = -1;
};

Moments assemble(const ModelSpec& f, const std::vector<const Statistic*>& ts, const ScoreSet& scores, ParamView theta,
                 const QuadratureSettings& quad, bool with_t_cov) {
  Evaluator ev(f, ts, scores, theta);
  QuadratureLedger ledger(quad);
  const std::size_t m = scores.size();
  const std::size_t r = ts.size();
  auto run = [&](auto&& body) {
    return ledger([&](Point x) { return body(ev.at(x)); }, f.support, theta, scores.breaks);
  };
  Moments out;
  out.score_mean.resize(m);
  out.sigma_s = SymMatrix(m);
  out.t_mean.resize(r);
  out.cross = Matrix(r, m);
  for (std::size_t i = 0; i < m; ++i) out.score_mean[i] = run([i](const Evaluator::Row& w) { return w.num[i]; });
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double s = run([i, j](const Evaluator::Row& w) { return w.f > 0.0 ? w.num[i] * w.num[j] / w.f : 0.0; });
      out.sigma_s.set(i, j, s - out.score_mean[i] * out.score_mean[j]);
    }
  }
  for (std::size_t a = 0; a < r; ++a) out.t_mean[a] = run([a](const Evaluator::Row& w) { return w.t[a] * w.f; });
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t i = 0; i < m; ++i) {
      out.cross(a, i) = run([a, i](const Evaluator::Row& w) { return w.t[a] * w.num[i]; }) -
                        out.t_mean[a] * out.score_mean[i];
    }
  }
  if (with_t_cov) {
    out.sigma_t = SymMatrix(r);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = a; b < r; ++b) {
        const double ma = out.t_mean[a];
        const double mb = out.t_mean[b];
        out.sigma_t.set(a, b, run([a, b, ma, mb](const Evaluator::Row& w) { return (w.t[a] - ma) * (w.t[b] - mb) * w.f; }));
      }
    }
  }
  out.quad_error = ledger.max_error();
  out.truncation = ledger.max_truncation();
  return out;
}

QuadratureSettings tight(QuadratureSettings q) {
  q.abs_tol = std::min(q.abs_tol, kTightAbsTol);
  q.rel_tol = std::min(q.rel_tol, kTightRelTol);
  q.max_subdivisions = std::max(q.max_subdivisions, 4000);
  return q;
}

double lambda_by_quadrature(const EscortPair& pair, const Statistic& t, ParamView theta, const BoundOptions& options) {
  pair.g.domain.require(theta);
  return integrate([&](Point x) { return t.eval(x) * pair.g.density(x, theta); }, pair.g.support, theta,
                   tight(options.quad))
      .value;
}

double lambda_value(const EscortPair& pair, const Statistic& t, ParamView theta, const BoundOptions& options,
                    std::string& path) {
  if (!options.numeric_lambda && t.lambda_under_g) {
    path = "closed-form";
    return t.lambda_under_g(theta);
  }
  path = "quadrature";
  return lambda_by_quadrature(pair, t, theta, options);
}

std::vector<double> lambda_partials(const EscortPair& pair, const Statistic& t, ParamView theta,
                                    const std::vector<MultiIndex>& indices, const BoundOptions& options,
                                    std::string& path) {
  std::vector<double> m;
  if (options.lambda_partial) {
    for (const auto& idx : indices) {
      const auto v = options.lambda_partial(theta, idx);
      if (!v) break;
      m.push_back(*v);
    }
    if (m.size() == indices.size()) {
      path = "supplied";
      return m;
    }
    m.clear();
  }
  int max_order = 0;
  for (const auto& idx : indices) {
    int total = 0;
    for (int a : idx) total += a;
    max_order = std::max(max_order, total);
  }
  if (!options.numeric_lambda && theta.size() == 1 && t.lambda_under_g.jet && max_order <= Jet::kMaxOrder) {
    const Jet j = t.lambda_under_g.jet(theta[0], max_order);
    for (const auto& idx : indices) m.push_back(j.derivative(idx[0]));
    path = "closed-form";
    return m;
  }
  path = "quadrature";
  auto lam = [&](ParamView p) { return lambda_by_quadrature(pair, t, p, options); };
  for (const auto& idx : indices) {
    if (theta.size() == 1) {
      m.push_back(derivative([&](double s) { return lam(ParamView(&s, 1)); }, theta[0], idx[0],
                             options.derivative_step, pair.g.domain.coords[0])
                      .value);
    } else {
      m.push_back(mixed_partial(lam, theta, idx, options.derivative_step, pair.g.domain.coords).value);
    }
  }
  return m;
}

std::string label(const MultiIndex& idx) {
  std::string s = "d";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s;
}

double attainment_tolerance(const BoundOptions& options, const Diagnostics& d) {
  if (options.attainment_tol) return *options.attainment_tol;
  const bool closed_lambda = d.lambda_path == "closed-form" || d.lambda_path == "supplied";
  const bool exact_scores = d.derivative_path != "numeric";
  return closed_lambda && exact_scores ? 1e-6 : 1e-4;
}

// Core of every engine: greedy positive-definite score selection, the
// quadratic form, the equality-condition correlation and the variance.
void project(BoundReport& report, const EscortPair& pair, const Statistic& t, ParamView theta, const ScoreSet& scores,
             const std::vector<double>& m, const BoundOptions& options) {
  if (m.size() != scores.size()) throw InvalidArgument("one M entry per score required");
  if (scores.size() == 0) throw InvalidArgument("empty score set");
  if (scores.size() > kMaxScores) throw InvalidArgument("more than 64 scores");
  const ModelSpec& f = pair.f;
  f.domain.require(theta);
  const Moments mo = assemble(f, {&t}, scores, theta, options.quad, options.compute_variance);
  Diagnostics& d = report.diagnostics;
  d.quad_error = mo.quad_error;
  d.truncation = mo.truncation;
  d.m_vector = m;
  d.score_mean_max = 0.0;
  d.identity_residual = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    d.score_mean_max = std::max(d.score_mean_max, std::fabs(mo.score_mean[i]));
    d.identity_residual = std::max(d.identity_residual, std::fabs(mo.cross(0, i) - m[i]));
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    keep.push_back(i);
    if (!cholesky(mo.sigma_s.principal(keep), kSingularPivotRatio).ok()) {
      keep.pop_back();
      d.degraded = true;
      d.dropped_scores.push_back(scores.labels.empty() ? std::to_string(i + 1) : scores.labels[i]);
    }
  }
  if (keep.empty()) throw NotPositiveDefinite("score covariance is singular", 1);
  const SymMatrix sigma = mo.sigma_s.principal(keep);
  std::vector<double> mk;
  std::vector<double> ck;
  for (std::size_t i : keep) {
    mk.push_back(m[i]);
    ck.push_back(mo.cross(0, i));
  }
  const CholeskyResult chol = cholesky(sigma, kSingularPivotRatio);
  d.sigma_condition = condition_estimate(*chol.factor);
  report.bound = quadratic_form_inv(sigma, mk);
  const std::vector<double> w = solve_spd(sigma, mk);

  if (!options.compute_variance) return;
  const double var = mo.sigma_t(0, 0);
  report.variance = var;
  report.gap = var - report.bound;
  const double scale = std::max(var, std::numeric_limits<double>::min());
  report.attained = *report.gap / scale <= attainment_tolerance(options, d);
  if (report.bound > 0.0 && var > 0.0) {
    double wc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) wc += w[i] * ck[i];
    d.equality_correlation = wc / std::sqrt(report.bound * var);
  }
  d.assumptions_checked = containment_violations(pair, theta, 1001) == 0;
}

BoundReport start_report(const std::string& method, const EscortPair& pair, ParamView theta, int order) {
  BoundReport r;
  r.method = method;
  r.model = pair.f.name;
  r.theta.assign(theta.begin(), theta.end());
  r.order = order;
  return r;
}

BoundReport derivative_bound(const std::string& method, const EscortPair& pair, const Statistic& t, ParamView theta,
                             int order, const std::vector<MultiIndex>& indices, const BoundOptions& options) {
  pair.f.domain.require(theta);
  BoundReport r = start_report(method, pair, theta, order);
  const ScoreSet scores = derivative_scores(pair, theta, indices, options);
  r.diagnostics.derivative_path = scores.provenance == ScoreSet::Provenance::mixed_partial ? "numeric" : "analytic";
  const auto m = lambda_partials(pair, t, theta, indices, options, r.diagnostics.lambda_path);
  project(r, pair, t, theta, scores, m, options);
  return r;
}

void check_node_support(const EscortPair& pair, ParamView theta0, ParamView node) {
  pair.g.domain.require(node);
  const auto fbox = pair.f.support.at(theta0);
  const auto gbox = pair.g.support.at(node);
  for (std::size_t c = 0; c < fbox.size(); ++c) {
    if (gbox[c].lo < fbox[c].lo || gbox[c].hi > fbox[c].hi) {
      throw SupportViolation("support of g at a node escapes the support of f at theta0");
    }
  }
}

void add_breaks(std::vector<double>& breaks, const EscortPair& pair, ParamView theta0, ParamView node) {
  const Interval f0 = pair.f.support.at(theta0)[0];
  const Interval g0 = pair.g.support.at(node)[0];
  for (double b : {g0.lo, g0.hi}) {
    if (std::isfinite(b) && f0.contains_open(b)) breaks.push_back(b);
  }
  for (double b : pair.g.support.breaks(node)) {
    if (f0.contains_open(b)) breaks.push_back(b);
  }
}

// Divided-difference scores along the node points, which differ from
// points[0] in one coordinate given by `values`.
void append_dd_scores(ScoreSet& scores, const EscortPair& pair, const std::vector<ParamVector>& points,
                      const NodeSet& values, const std::string& prefix) {
  auto g = std::make_shared<const ModelSpec>(pair.g);
  auto pts = std::make_shared<const std::vector<ParamVector>>(points);
  for (const auto& p : points) {
    check_node_support(pair, points[0], p);
    add_breaks(scores.breaks, pair, points[0], p);
  }
  for (int i = 1; i <= values.k(); ++i) {
    const auto w = lagrange_weights(values, i);
    scores.numerators.push_back([g, pts, w](Point x) {
      double acc = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * g->density(x, (*pts)[j]);
      return acc;
    });
    scores.labels.push_back(prefix + "D" + std::to_string(i));
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices(std::size_t p, int k) {
  if (p == 0 || k < 1) throw InvalidArgument("multi-indices need p >= 1 and k >= 1");
  std::vector<MultiIndex> out;
  for (int total = 1; total <= k; ++total) {
    MultiIndex idx(p, 0);
    // Compositions of `total` into p parts, first coordinate descending.
    std::function<void(std::size_t, int)> rec = [&](std::size_t c, int left) {
      if (c + 1 == p) {
        idx[c] = left;
        out.push_back(idx);
        return;
      }
      for (int a = left; a >= 0; --a) {
        idx[c] = a;
        rec(c + 1, left - a);
      }
    };
    rec(0, total);
    if (out.size() > kMaxScores) throw InvalidArgument("number of multi-indices exceeds 64");
  }
  return out;
}

ScoreSet derivative_scores(const EscortPair& pair, ParamView theta, const std::vector<MultiIndex>& indices,
                           const BoundOptions& options) {
  pair.g.domain.require(theta);
  ScoreSet s;
  auto g = std::make_shared<const ModelSpec>(pair.g);
  const ParamVector th(theta.begin(), theta.end());
  bool analytic = !options.numeric_density_derivatives && g->has_analytic_derivatives();
  if (analytic) {
    // Probe one interior point: a partial callback may decline some orders.
    const auto box = g->support.at(theta);
    std::vector<double> probe;
    for (const Interval& iv : box) {
      probe.push_back(iv.finite() ? 0.5 * (iv.lo + iv.hi) : std::isfinite(iv.lo) ? iv.lo + 1.0 : std::isfinite(iv.hi) ? iv.hi - 1.0 : 0.0);
    }
    for (const auto& idx : indices) analytic = analytic && g->analytic_partial(probe, th, idx).has_value();
  }
  s.provenance = analytic ? ScoreSet::Provenance::escort_derivative : ScoreSet::Provenance::mixed_partial;
  const double step = options.derivative_step;
  for (const auto& idx : indices) {
    if (idx.size() != th.size()) throw InvalidArgument("multi-index length differs from parameter dimension");
    s.labels.push_back(label(idx));
    if (analytic) {
      s.numerators.push_back([g, th, idx](Point x) { return *g->analytic_partial(x, th, idx); });
    } else {
      s.numerators.push_back([g, th, idx, step](Point x) {
        const ParamVector xv(x.begin(), x.end());
        auto h = [&](ParamView p) { return g->density(xv, p); };
        if (th.size() == 1) {
          return derivative([&](double v) { return h(ParamView(&v, 1)); }, th[0], idx[0], step, g->domain.coords[0])
              .value;
        }
        return mixed_partial(h, th, idx, step, g->domain.coords).value;
      });
    }
  }
  for (double b : g->support.breaks(theta)) s.breaks.push_back(b);
  return s;
}

SymMatrix generalized_fisher(const EscortPair& pair, ParamView theta, const BoundOptions& options) {
  pair.f.domain.require(theta);
  const ScoreSet s = derivative_scores(pair, theta, multi_indices(theta.size(), 1), options);
  Evaluator ev(pair.f, {}, s, theta);
  QuadratureLedger ledger(options.quad);
  SymMatrix n(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i; j < s.size(); ++j) {
      n.set(i, j, ledger(
                      [&](Point x) {
                        const auto& w = ev.at(x);
                        return w.f > 0.0 ? w.num[i] * w.num[j] / w.f : 0.0;
                      },
                      pair.f.support, theta, s.breaks));
    }
  }
  const CholeskyResult c = cholesky(n, kSingularPivotRatio);
  if (!c.ok()) throw NotPositiveDefinite("generalized Fisher information is singular", c.failed_pivot);
  return n;
}

BoundReport naudts_bound(const EscortPair& pair, const Statistic& t, ParamView theta, const BoundOptions& options) {
  return derivative_bound("naudts", pair, t, theta, 1, multi_indices(theta.size(), 1), options);
}

BoundReport classical_cr(const ModelSpec& f, const Statistic& t, ParamView theta, const BoundOptions& options) {
  return derivative_bound("cr", EscortPair::self(f), t, theta, 1, multi_indices(theta.size(), 1), options);
}

BoundReport bhattacharyya_regular(const EscortPair& pair, const Statistic& t, double theta, int order,
                                  const BoundOptions& options) {
  if (pair.f.param_dim != 1) throw InvalidArgument("the regular Bhattacharyya bound needs a scalar parameter");
  if (order < 1 || order > Jet::kMaxOrder) throw InvalidArgument("order must be in 1..8");
  return derivative_bound("bhatt", pair, t, ParamView(&theta, 1), order, multi_indices(1, order), options);
}

BoundReport bhattacharyya_dd(const EscortPair& pair, const Statistic& t, const NodeSet& nodes,
                             const BoundOptions& options) {
  if (pair.f.param_dim != 1) throw InvalidArgument("the divided-difference bound needs a scalar parameter");
  const double theta0 = nodes.base();
  const ParamView th(&theta0, 1);
  pair.f.domain.require(th);
  BoundReport r = start_report("bhatt-dd", pair, th, nodes.k());
  r.nodes = nodes.values();
  std::vector<ParamVector> pts;
  for (double v : nodes.values()) pts.push_back({v});
  ScoreSet scores;
  scores.provenance = ScoreSet::Provenance::escort_divided_difference;
  append_dd_scores(scores, pair, pts, nodes, "");
  std::vector<double> lam;
  for (const auto& p : pts) lam.push_back(lambda_value(pair, t, p, options, r.diagnostics.lambda_path));
  const auto table = divided_difference_from_values(nodes, lam);
  std::vector<double> m;
  for (int i = 1; i <= nodes.k(); ++i) m.push_back(table.leading(i));
  r.diagnostics.derivative_path = "none";
  project(r, pair, t, th, scores, m, options);
  return r;
}

BoundReport bhattacharyya_dd_sup(const EscortPair& pair, const Statistic& t, double theta0, int order,
                                 const SearchSettings& search, const BoundOptions& options) {
  if (order < 1 || order > 8) throw InvalidArgument("order must be in 1..8");
  const ParamView th(&theta0, 1);
  pair.f.domain.require(th);
  const Interval dom = pair.f.domain.coords.at(0);
  const double reach = std::max(1.0, std::fabs(theta0));
  const double lo = std::isnan(search.lo) ? std::max(dom.lo, theta0 - reach) : search.lo;
  const double hi = std::isnan(search.hi) ? std::min(dom.hi, theta0 + reach) : search.hi;
  if (!(lo < hi) || theta0 < lo || theta0 > hi) throw InvalidArgument("search box must contain theta0");
  const int pts = std::max(2, search.grid_points);
  const double max_offset = 0.5 * (hi - lo);
  if (!(search.min_offset > 0.0 && search.min_offset < max_offset)) throw InvalidArgument("bad search offsets");

  BoundOptions quick = options;
  quick.compute_variance = false;
  auto objective = [&](const std::vector<double>& free) -> double {
    std::vector<double> nodes{theta0};
    for (double v : free) {
      if (!(v > lo && v < hi) || !dom.contains_open(v)) return -kInf;
      nodes.push_back(v);
    }
    try {
      return bhattacharyya_dd(pair, t, NodeSet(nodes), quick).bound;
    } catch (const Error&) {
      return -kInf;
    }
  };

  std::vector<double> cand;
  for (int i = 0; i < pts; ++i) {
    const double d = search.min_offset * std::pow(max_offset / search.min_offset, static_cast<double>(i) / (pts - 1));
    for (double v : {theta0 - d, theta0 + d}) {
      if (v > lo && v < hi && dom.contains_open(v)) cand.push_back(v);
    }
  }
  std::sort(cand.begin(), cand.end());
  if (cand.size() < static_cast<std::size_t>(order)) throw SupportViolation("no feasible node placement");

  // Stage 1: strictly increasing node combinations on the grid.
  double best = -kInf;
  std::vector<double> best_nodes;
  std::vector<std::size_t> pick(static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  long visited = 0;
  while (visited < 20000) {
    std::vector<double> free;
    for (std::size_t i : pick) free.push_back(cand[i]);
    const double v = objective(free);
    ++visited;
    if (v > best) {
      best = v;
      best_nodes = free;
    }
    std::size_t i = pick.size();
    while (i-- > 0) {
      if (pick[i] < cand.size() - pick.size() + i) break;
    }
    if (i == static_cast<std::size_t>(-1)) break;
    ++pick[i];
    for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  if (!std::isfinite(best)) throw SupportViolation("no feasible node placement");

  // Stage 2: local simplex refinement from the best grid point.
  std::vector<double> scale;
  for (double v : best_nodes) scale.push_back(0.25 * std::max(std::fabs(v - theta0), search.min_offset));
  const SimplexResult sr = nelder_mead([&](const std::vector<double>& x) { return -objective(x); }, best_nodes, scale,
                                       search.max_iterations, search.tolerance);
  if (std::isfinite(sr.value) && -sr.value > best) best_nodes = sr.x;

  std::vector<double> nodes{theta0};
  nodes.insert(nodes.end(), best_nodes.begin(), best_nodes.end());
  BoundReport r = bhattacharyya_dd(pair, t, NodeSet(nodes), options);
  r.method = "bhatt-dd-sup";
  r.diagnostics.argmax_nodes = best_nodes;
  return r;
}

BoundReport hcr_bound(const ModelSpec& f, const Statistic& t, double theta0, const SearchSettings& search,
                      const BoundOptions& options) {
  BoundReport r = bhattacharyya_dd_sup(EscortPair::self(f), t, theta0, 1, search, options);
  r.method = "hcr";
  return r;
}

BoundReport multiparam_bound(const EscortPair& pair, const Statistic& t, ParamView theta, int order,
                             const BoundOptions& options) {
  return derivative_bound("multi", pair, t, theta, order, multi_indices(theta.size(), order), options);
}

BoundReport multiparam_dd_bound(const EscortPair& pair, const Statistic& t, ParamView theta0,
                                const std::vector<std::vector<double>>& nodes, const BoundOptions& options) {
  pair.f.domain.require(theta0);
  if (nodes.size() != theta0.size()) throw InvalidArgument("one node list per coordinate required");
  BoundReport r = start_report("multi-dd", pair, theta0, 0);
  ScoreSet scores;
  scores.provenance = ScoreSet::Provenance::escort_divided_difference;
  std::vector<double> m;
  for (std::size_t c = 0; c < nodes.size(); ++c) {
    r.nodes.insert(r.nodes.end(), nodes[c].begin(), nodes[c].end());
    if (nodes[c].size() < 2) continue;
    if (nodes[c][0] != theta0[c]) throw InvalidArgument("each node list must start at theta0");
    const NodeSet values(nodes[c]);
    std::vector<ParamVector> pts;
    for (double v : nodes[c]) {
      ParamVector p(theta0.begin(), theta0.end());
      p[c] = v;
      pts.push_back(std::move(p));
    }
    append_dd_scores(scores, pair, pts, values, "c" + std::to_string(c + 1));
    const auto table = multiparam_divided_difference(
        [&](ParamView p) { return lambda_value(pair, t, p, options, r.diagnostics.lambda_path); }, pts, c);
    for (int i = 1; i <= values.k(); ++i) m.push_back(table.leading(i));
    r.order = std::max(r.order, values.k());
  }
  if (scores.size() == 0) throw InvalidArgument("no coordinate has two or more nodes");
  r.diagnostics.derivative_path = "none";
  project(r, pair, t, theta0, scores, m, options);
  return r;
}

BoundReport score_bound(const ModelSpec& f, const Statistic& t, ParamView theta, const ScoreSet& scores,
                        const std::vector<double>& m, const BoundOptions& options) {
  const EscortPair pair = EscortPair::self(f);
  BoundReport r = start_report("custom", pair, theta, static_cast<int>(scores.size()));
  r.diagnostics.lambda_path = "supplied";
  r.diagnostics.derivative_path = "analytic";
  project(r, pair, t, theta, scores, m, options);
  return r;
}

double SchurReport::direction_gap(std::span<const double> alpha) const {
  if (alpha.size() != sigma_t.dim()) throw InvalidArgument("direction has the wrong length");
  double v = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      v += alpha[i] * sigma_t(i, k) * alpha[k];
      b += alpha[i] * j(i, k) * alpha[k];
    }
  }
  return v - b;
}

SchurReport vector_schur_bound(const EscortPair& pair, const std::vector<Statistic>& ts, const ScoreSet& scores,
                               ParamView theta, const BoundOptions& options) {
  pair.f.domain.require(theta);
  if (ts.empty() || scores.size() == 0) throw InvalidArgument("need at least one statistic and one score");
  std::vector<const Statistic*> ptrs;
  for (const auto& t : ts) ptrs.push_back(&t);
  const Moments mo = assemble(pair.f, ptrs, scores, theta, options.quad, true);
  const SchurResult s = schur_complement(mo.sigma_t, mo.cross, mo.sigma_s);
  SchurReport out{s.projected, mo.sigma_t, s.complement, psd_certificate(s.complement), mo.cross, mo.sigma_s,
                  mo.quad_error};
  return out;
}

double verify_equality_condition(const EscortPair& pair, const Statistic& t, ParamView theta,
                                 const BoundOptions& options) {
  BoundOptions o = options;
  o.compute_variance = true;
  const BoundReport r = naudts_bound(pair, t, theta, o);
  if (!r.diagnostics.equality_correlation) throw InvalidArgument("zero variance on one side of the equality condition");
  return *r.diagnostics.equality_correlation;
}

}  // namespace infoineq
