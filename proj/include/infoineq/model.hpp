#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infoineq/jet.hpp"
#include "infoineq/quadrature.hpp"
#include "infoineq/support.hpp"

namespace infoineq {

/// Open box of admissible parameters; the boundary is excluded.
struct ParamBox {
  std::vector<Interval> coords;

  std::size_t dim() const { return coords.size(); }
  bool contains(ParamView theta) const;
  /// Throws DomainError when theta is not strictly inside the box.
  void require(ParamView theta) const;

  static ParamBox positive(std::size_t dim = 1) { return {std::vector<Interval>(dim, Interval{0.0, kInf})}; }
  static ParamBox real(std::size_t dim = 1) { return {std::vector<Interval>(dim, Interval{})}; }
};

using DensityFn = std::function<double(Point, ParamView)>;
/// Exact derivatives in a scalar parameter, carried by a Jet of `order`.
using ThetaJetFn = std::function<Jet(Point, double theta, int order)>;
/// Analytic mixed partial of the density; nullopt when not available.
using PartialFn = std::function<std::optional<double>(Point, ParamView, const MultiIndex&)>;
/// Quantile function u -> x for u in (0, 1).
using QuantileFn = std::function<double(double u, ParamView)>;

/// A parametrized density (or pmf) family.
struct ModelSpec {
  std::string name;
  Support support;
  std::size_t param_dim = 1;
  ParamBox domain;
  DensityFn pdf;
  ThetaJetFn theta_jet;
  PartialFn partial;
  QuantileFn quantile;

  /// Density at x, zero outside support(theta).
  double density(Point x, ParamView theta) const;
  double density(double x, double theta) const;

  /// Analytic partial when one is wired (jet or partial callback).
  std::optional<double> analytic_partial(Point x, ParamView theta, const MultiIndex& index) const;
  bool has_analytic_derivatives() const { return static_cast<bool>(theta_jet) || static_cast<bool>(partial); }
};

/// Closed-form quantity with a printable formula.
struct ClosedForm {
  std::string text;
  std::function<double(ParamView)> eval;
  /// Exact scalar-parameter derivatives, when available.
  std::function<Jet(double, int)> jet;

  explicit operator bool() const { return static_cast<bool>(eval); }
  double operator()(ParamView theta) const { return eval(theta); }
  double operator()(double theta) const { return eval(ParamView(&theta, 1)); }
};

/// An estimator T(x), optionally with its target phi(theta) = E_f[T] and its
/// mean lambda(theta) = E_g[T] under the escort.
struct Statistic {
  std::string name;
  std::function<double(Point)> eval;
  ClosedForm target;
  ClosedForm lambda_under_g;

  double operator()(Point x) const { return eval(x); }
  double operator()(double x) const { return eval(Point(&x, 1)); }
};

/// Model f paired with escort g on the same parameter domain.
struct EscortPair {
  ModelSpec f;
  ModelSpec g;
  bool containment_checked = false;

  /// Throws InvalidArgument when dimensions or domains differ.
  static EscortPair make(ModelSpec f, ModelSpec g);
  /// The classical case g = f.
  static EscortPair self(const ModelSpec& f);
};

/// Samples the supports of f and g at theta and checks g > 0 => f > 0.
/// Returns the number of violating sample points.
std::size_t containment_violations(const EscortPair& pair, ParamView theta, int samples = 4001);

/// |integral of pdf - 1| (or the lattice analogue).
double normalization_check(const ModelSpec& m, ParamView theta, const QuadratureSettings& settings = {});

/// E_m[fn] by quadrature.
double expectation(const ModelSpec& m, const std::function<double(Point)>& fn, ParamView theta,
                   const QuadratureSettings& settings = {});

struct VarianceResult {
  double value = 0.0;
  double mean = 0.0;
  double error = 0.0;
  long truncation = -1;
};

/// Var_m(T) by two-pass quadrature; throws DivergentMoment when the second
/// moment does not converge.
VarianceResult variance_of(const Statistic& t, const ModelSpec& m, ParamView theta,
                           const QuadratureSettings& settings = {});

using Hyper = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  Hyper hyper;
  EscortPair escort;
  Statistic statistic;
  ClosedForm variance;
  ClosedForm fisher;
  ClosedForm lambda;
  ClosedForm bound;
  std::string notes;
  std::vector<ParamVector> reference_points;
};

struct CatalogInfo {
  std::string name;
  std::string signature;
  std::string summary;
};

/// The seven worked examples, in a fixed order.
const std::vector<CatalogInfo>& catalog_index();

/// Throws InvalidArgument on an unknown name or invalid hyperparameters.
CatalogEntry catalog_lookup(std::string_view name, const Hyper& hyper = {});

/// |E_f[T] - phi(theta)|; requires a target.
double unbiasedness_check(const CatalogEntry& entry, ParamView theta, const QuadratureSettings& settings = {});

/// Families used by the multiparameter and vector-estimator engines.
namespace families {

/// X ~ N(mu, v), theta = (mu, v); analytic mixed partials of any order.
ModelSpec gaussian_single();

/// (xbar, s^2) of n >= 2 normal draws, theta = (mu, v); analytic first partials.
ModelSpec gaussian_sample(int n);

/// X ~ N(theta, sigma^2), scalar location with exact jets.
ModelSpec gaussian_location(double sigma = 1.0);

/// Single Poisson observation with mean theta.
ModelSpec poisson();

/// Gamma(alpha) with scale theta.
ModelSpec gamma_scale(double alpha);

}  // namespace families

}  // namespace infoineq
