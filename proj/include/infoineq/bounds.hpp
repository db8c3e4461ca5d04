#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "infoineq/differences.hpp"
#include "infoineq/linalg.hpp"
#include "infoineq/model.hpp"

namespace infoineq {

/// Partial derivative of lambda(theta) = E_g[T] supplied by the caller.
using LambdaPartialFn = std::function<std::optional<double>(ParamView, const MultiIndex&)>;

struct BoundOptions {
  QuadratureSettings quad = QuadratureSettings::from_env();
  /// Ignore closed-form lambda and use quadrature plus numeric differentiation.
  bool numeric_lambda = false;
  /// Ignore analytic density derivatives and difference g pointwise in x.
  bool numeric_density_derivatives = false;
  /// Relative-gap tolerance for `attained`; unset picks 1e-6 or 1e-4 by path.
  std::optional<double> attainment_tol;
  /// Step for numeric theta-derivatives; 0 selects default_step.
  double derivative_step = 0.0;
  /// Skip Var_f(T) (no gap or attainment in the report).
  bool compute_variance = true;
  /// Exact partials of lambda, tried before every other path.
  LambdaPartialFn lambda_partial;
};

struct Diagnostics {
  double sigma_condition = std::numeric_limits<double>::quiet_NaN();
  double quad_error = 0.0;
  long truncation = -1;
  std::optional<double> equality_correlation;
  std::vector<double> argmax_nodes;
  /// "closed-form", "supplied" or "quadrature".
  std::string lambda_path;
  /// "analytic", "numeric" or "none".
  std::string derivative_path;
  bool degraded = false;
  std::vector<std::string> dropped_scores;
  double score_mean_max = 0.0;
  /// max_i |Cov_f(T, S_i) - M_i|
  double identity_residual = 0.0;
  std::vector<double> m_vector;
  /// False when the pair did not come from the catalog.
  bool assumptions_checked = true;
};

struct BoundReport {
  std::string method;
  std::string model;
  Hyper hyper;
  ParamVector theta;
  int order = 1;
  /// Scalar node set, or the per-coordinate lists concatenated for multi-dd.
  std::vector<double> nodes;
  double bound = 0.0;
  std::optional<double> variance;
  std::optional<double> gap;
  std::optional<bool> attained;
  Diagnostics diagnostics;
};

/// Score functions at a fixed parameter, stored as numerators: S_i = num_i / f.
struct ScoreSet {
  enum class Provenance { escort_derivative, escort_divided_difference, mixed_partial, custom };

  Provenance provenance = Provenance::custom;
  std::vector<PointFn> numerators;
  std::vector<std::string> labels;
  /// Extra first-coordinate kinks for the quadrature.
  std::vector<double> breaks;

  std::size_t size() const { return numerators.size(); }
};

/// Multi-indices 0 < |i| <= k in p coordinates, by total degree and then
/// lexicographically with the first coordinate largest first:
/// (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<MultiIndex> multi_indices(std::size_t p, int k);

/// Scores d^i g / f at theta for each multi-index.
ScoreSet derivative_scores(const EscortPair& pair, ParamView theta, const std::vector<MultiIndex>& indices,
                           const BoundOptions& options = {});

/// N_ij = int d_i g d_j g / f; throws NotPositiveDefinite when N is singular.
SymMatrix generalized_fisher(const EscortPair& pair, ParamView theta, const BoundOptions& options = {});

BoundReport naudts_bound(const EscortPair& pair, const Statistic& t, ParamView theta, const BoundOptions& options = {});

/// Classical Cramer-Rao bound (g = f, first order).
BoundReport classical_cr(const ModelSpec& f, const Statistic& t, ParamView theta, const BoundOptions& options = {});

/// Scores g^(i) / f and M = (lambda', ..., lambda^(k)).
BoundReport bhattacharyya_regular(const EscortPair& pair, const Statistic& t, double theta, int order,
                                  const BoundOptions& options = {});

/// Divided-difference bound at theta^0 = nodes[0]. Throws SupportViolation
/// when supp g(., theta^j) is not inside supp f(., theta^0).
BoundReport bhattacharyya_dd(const EscortPair& pair, const Statistic& t, const NodeSet& nodes,
                             const BoundOptions& options = {});

struct SearchSettings {
  /// Search box for the nodes; NaN means the domain intersected with
  /// theta0 -/+ max(1, |theta0|).
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  int grid_points = 9;
  double min_offset = 1e-4;
  int max_iterations = 200;
  double tolerance = 1e-8;
};

/// Best divided-difference bound over node placements: log grid, then simplex.
BoundReport bhattacharyya_dd_sup(const EscortPair& pair, const Statistic& t, double theta0, int order,
                                 const SearchSettings& search = {}, const BoundOptions& options = {});

/// Hammersley-Chapman-Robbins: the first-order sup with g = f.
BoundReport hcr_bound(const ModelSpec& f, const Statistic& t, double theta0, const SearchSettings& search = {},
                      const BoundOptions& options = {});

/// Mixed-partial scores over every multi-index with 0 < |i| <= order.
BoundReport multiparam_bound(const EscortPair& pair, const Statistic& t, ParamView theta, int order,
                             const BoundOptions& options = {});

/// Per-coordinate divided-difference scores. nodes[c] lists the values of
/// coordinate c, starting with theta0[c]; lists of length 1 contribute nothing.
BoundReport multiparam_dd_bound(const EscortPair& pair, const Statistic& t, ParamView theta0,
                                const std::vector<std::vector<double>>& nodes, const BoundOptions& options = {});

/// M^T Sigma^-1 M for an arbitrary score set with M_i = Cov_f(T, S_i) given.
BoundReport score_bound(const ModelSpec& f, const Statistic& t, ParamView theta, const ScoreSet& scores,
                        const std::vector<double>& m, const BoundOptions& options = {});

struct SchurReport {
  SymMatrix j;
  SymMatrix sigma_t;
  SymMatrix complement;
  PsdCertificate certificate;
  Matrix cross;
  SymMatrix sigma_s;
  double quad_error = 0.0;

  /// Var(alpha^T T) - alpha^T J alpha.
  double direction_gap(std::span<const double> alpha) const;
};

/// J = Sigma_TS Sigma_S^-1 Sigma_ST with a certificate that Sigma_T - J is PSD.
SchurReport vector_schur_bound(const EscortPair& pair, const std::vector<Statistic>& ts, const ScoreSet& scores,
                               ParamView theta, const BoundOptions& options = {});

/// Correlation under f between S^T Sigma^-1 M and T - phi(theta) for the
/// first-order escort scores.
double verify_equality_condition(const EscortPair& pair, const Statistic& t, ParamView theta,
                                 const BoundOptions& options = {});

}  // namespace infoineq
