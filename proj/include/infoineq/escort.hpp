#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "infoineq/model.hpp"

namespace infoineq {

/// A one-dimensional base density f(x) at the reference parameter (0 for
/// location, 1 for scale).
struct BaseDensity {
  std::string name;
  std::function<double(double)> pdf;
  Interval support;
  std::vector<double> breaks;
};

/// Tabulation controls. A NaN range end is chosen from the support, or from
/// the decay of the integrand on an infinite side.
struct SynthGrid {
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  int initial_points = 64;
  double tolerance = 1e-11;
  int max_points = 20000;
};

enum class FamilyRule { location_shift, scale };

/// g(x) = normalizer * kernel(x) and the family it generates:
/// g(x - theta) for location, g(x / theta) / theta for scale.
class SynthesizedDensity {
 public:
  SynthesizedDensity(std::string base_name, FamilyRule rule, std::vector<double> x, std::vector<double> kernel,
                     std::vector<double> slope, double x0, double sign);

  const std::string& base_name() const { return base_name_; }
  FamilyRule family_rule() const { return rule_; }
  double normalizer() const { return normalizer_; }
  /// +1, or -1 when the raw kernel was nonpositive and got flipped.
  double orientation() const { return sign_; }
  double x0() const { return x0_; }
  Interval range() const { return {x_.front(), x_.back()}; }
  const std::vector<double>& nodes() const { return x_; }

  /// Oriented kernel; zero outside the tabulated range.
  double kernel(double x) const;
  double kernel_prime(double x) const;
  double g(double x) const { return normalizer_ * kernel(x); }
  double g_prime(double x) const { return normalizer_ * kernel_prime(x); }
  double density(double x, double theta) const;
  /// d/dtheta of density(x, theta).
  double density_theta(double x, double theta) const;

  /// The escort family as a model on the given parameter domain.
  ModelSpec model(const ParamBox& domain) const;
  /// CSV with columns x, kernel, g at every tabulation node.
  void write_csv(std::ostream& out) const;

 private:
  struct Interp;
  std::string base_name_;
  FamilyRule rule_;
  std::vector<double> x_;
  std::vector<double> k_;
  std::vector<double> dk_;
  double x0_;
  double sign_;
  double normalizer_ = 1.0;
  std::shared_ptr<const Interp> interp_;
};

/// Location escort: kernel h(x) = int_{x0}^x (phi0 - T(u)) f(u) du with x0 the
/// left support endpoint. Throws NoValidEscort on a sign change, a zero kernel
/// or a kernel that does not return to zero on the right.
SynthesizedDensity synth_location(const BaseDensity& f, const Statistic& t, double phi0, const SynthGrid& grid = {});

/// Scale escort: kernel k(x) = h(x) / x with h(x) = int_{x0}^x (phi1 - T(u)) f(u) du.
/// Additionally throws NoValidEscort when x0 * f(x0) does not vanish.
SynthesizedDensity synth_scale(const BaseDensity& f, const Statistic& t, double phi1, const SynthGrid& grid = {});

/// f(x - theta) as a model.
ModelSpec location_model(const BaseDensity& f, const ParamBox& domain = ParamBox::real());
/// f(x / theta) / theta as a model; the base support must be scale invariant.
ModelSpec scale_model(const BaseDensity& f);

/// g(x; theta) = Z(theta T(x) - phi(theta)) against the base measure
/// weight(x) dx on `support`, with F the inverse of Z.
struct DeformedFamily {
  std::string name;
  std::function<double(double)> F;
  std::function<double(double)> F_prime;
  std::function<double(double)> Z;
  Statistic T;
  Interval support;
  std::function<double(double)> weight;
  /// Kinks of x -> Z(theta T(x) - phi) for a given (theta, phi).
  std::function<std::vector<double>(double theta, double phi)> kinks;
  ParamBox domain = ParamBox::real();

  /// Bisection after geometric bracket expansion from 0; cached per theta.
  double phi(double theta) const;
  /// g against the base measure, i.e. Z(theta T(x) - phi(theta)).
  double g(double x, double theta) const;
  /// int weight / F'(g) over {g > 0}.
  double h_F(double theta) const;
  /// max |Z(F(u)) - u| over a grid of u in (0, u_max].
  double inverse_residual(double u_max = 10.0, int points = 200) const;

  QuadratureSettings quad;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<double, double> phi;
    std::map<double, double> h;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
  std::vector<double> breaks(double theta, double c) const;
};

/// The F-escort density f(x, theta) = weight(x) / (F'(g) h_F(theta)) on {g > 0}.
std::function<double(double)> f_escort(const DeformedFamily& d, double theta);

/// The pair (F-escort model, deformed family) with analytic theta-scores.
EscortPair deformed_pair(const DeformedFamily& d);

namespace deformed {

/// F(u) = u - 1, Z(u) = [1 + u]_+, T = max of n uniforms, base measure n t^{n-1} dt.
DeformedFamily uniform_max(int n);
/// Canonical parameter of uniform_max(n) for the uniform bound theta.
double uniform_max_canonical(int n, double theta);

/// F(u) = u - 1 with T(x) = x on [0, b].
DeformedFamily linear(double b);

/// F = log, Z = exp: an exponential family with T(x) = x on [0, b].
DeformedFamily logarithmic(double b);

}  // namespace deformed

}  // namespace infoineq
