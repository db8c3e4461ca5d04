#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "infoineq/errors.hpp"
#include "infoineq/model.hpp"

namespace infoineq {

namespace {

Jet as_jet(const Jet& j, int) { return j; }
Jet as_jet(double v, int order) { return Jet::constant(v, order); }

// Scalar closed form from a generic callable usable with double and Jet.
template <class F>
ClosedForm closed(std::string text, F fn) {
  ClosedForm c;
  c.text = std::move(text);
  c.eval = [fn](ParamView t) { return static_cast<double>(fn(t[0])); };
  c.jet = [fn](double t, int order) { return as_jet(fn(Jet::variable(t, order)), order); };
  return c;
}

// Scalar-parameter model from a generic density (x, theta) -> value.
template <class F>
ModelSpec scalar_model(std::string name, Support support, ParamBox domain, F density) {
  ModelSpec m;
  m.name = std::move(name);
  m.support = std::move(support);
  m.domain = std::move(domain);
  m.pdf = [density](Point x, ParamView t) { return density(x[0], t[0]); };
  m.theta_jet = [density](Point x, double t, int order) { return as_jet(density(x[0], Jet::variable(t, order)), order); };
  return m;
}

Statistic statistic(std::string name, std::function<double(double)> t) {
  Statistic s;
  s.name = std::move(name);
  s.eval = [t = std::move(t)](Point x) { return t(x[0]); };
  return s;
}

class HyperReader {
 public:
  HyperReader(std::string_view model, const Hyper& hyper) : model_(model), hyper_(hyper) {}

  double real(const std::string& key) {
    used_.insert(key);
    const auto it = hyper_.find(key);
    if (it == hyper_.end()) throw InvalidArgument(model_ + ": missing hyperparameter " + key);
    if (!std::isfinite(it->second)) throw InvalidArgument(model_ + ": hyperparameter " + key + " must be finite");
    return it->second;
  }

  int integer(const std::string& key, int min) {
    const double v = real(key);
    if (v != std::floor(v) || v < min || v > 1000) {
      throw InvalidArgument(model_ + ": hyperparameter " + key + " must be an integer >= " + std::to_string(min));
    }
    return static_cast<int>(v);
  }

  Hyper finish() const {
    for (const auto& [key, value] : hyper_) {
      if (!used_.count(key)) throw InvalidArgument(model_ + ": unknown hyperparameter " + key);
    }
    return hyper_;
  }

 private:
  std::string model_;
  const Hyper& hyper_;
  std::set<std::string> used_;
};

constexpr double kInvSqrt2Pi = 0.3989422804014327;

const std::vector<ParamVector> kReferencePoints = {{0.5}, {1.0}, {2.0}};

Support power_support() {
  return Support::continuous_1d([](ParamView t) { return Interval{0.0, t[0]}; });
}

CatalogEntry uniform_max(HyperReader& r) {
  const int n = r.integer("n", 1);
  const double dn = n;
  CatalogEntry e;
  e.name = "uniform-max";
  auto f = scalar_model("uniform-max.f", power_support(), ParamBox::positive(),
                        [dn](double x, const auto& t) { return dn * std::pow(x, dn - 1.0) * pow(t, -dn); });
  f.quantile = [dn](double u, ParamView t) { return t[0] * std::pow(u, 1.0 / dn); };
  auto g = scalar_model("uniform-max.g", power_support(), ParamBox::positive(), [dn](double x, const auto& t) {
    return dn * (dn + 1.0) * (1.0 - x / t) * std::pow(x, dn - 1.0) * pow(t, -dn);
  });
  e.escort = EscortPair::make(std::move(f), std::move(g));
  e.statistic = statistic("(n+1)x/n", [dn](double x) { return (dn + 1.0) * x / dn; });
  e.statistic.target = closed("theta", [](const auto& t) { return t; });
  e.lambda = closed("(n+1)theta/(n+2)", [dn](const auto& t) { return t * ((dn + 1.0) / (dn + 2.0)); });
  e.statistic.lambda_under_g = e.lambda;
  e.variance = closed("theta^2/(n(n+2))", [dn](const auto& t) { return t * t / (dn * (dn + 2.0)); });
  e.fisher = closed("n(n+1)^2/((n+2)theta^2)",
                    [dn](const auto& t) { return dn * (dn + 1.0) * (dn + 1.0) / ((dn + 2.0) * (t * t)); });
  e.bound = e.variance;
  e.notes = "maximum of n uniforms on [0, theta]; T assumed complete so U_f is contained in U_g";
  return e;
}

CatalogEntry expmin(HyperReader& r) {
  const int n = r.integer("n", 1);
  const double dn = n;
  CatalogEntry e;
  e.name = "expmin";
  auto support = Support::continuous_1d([](ParamView t) { return Interval{t[0], kInf}; });
  auto f = scalar_model("expmin.f", support, ParamBox::positive(),
                        [dn](double x, const auto& t) { return dn * exp(dn * (t - x)); });
  f.quantile = [dn](double u, ParamView t) { return t[0] - std::log1p(-u) / dn; };
  auto g = scalar_model("expmin.g", support, ParamBox::positive(),
                        [dn](double x, const auto& t) { return dn * dn * (x - t) * exp(dn * (t - x)); });
  e.escort = EscortPair::make(std::move(f), std::move(g));
  e.statistic = statistic("x-1/n", [dn](double x) { return x - 1.0 / dn; });
  e.statistic.target = closed("theta", [](const auto& t) { return t; });
  e.lambda = closed("theta+1/n", [dn](const auto& t) { return t + 1.0 / dn; });
  e.statistic.lambda_under_g = e.lambda;
  e.variance = closed("1/n^2", [dn](const auto&) { return 1.0 / (dn * dn); });
  e.fisher = closed("n^2", [dn](const auto&) { return dn * dn; });
  e.bound = e.variance;
  e.notes = "minimum of n shifted unit exponentials";
  return e;
}

CatalogEntry uniform_max_power(HyperReader& r) {
  const int n = r.integer("n", 1);
  const int k = r.integer("k", 1);
  const double dn = n;
  const double dk = k;
  CatalogEntry e;
  e.name = "uniform-max-power";
  auto f = scalar_model("uniform-max-power.f", power_support(), ParamBox::positive(),
                        [dn](double x, const auto& t) { return dn * std::pow(x, dn - 1.0) * pow(t, -dn); });
  f.quantile = [dn](double u, ParamView t) { return t[0] * std::pow(u, 1.0 / dn); };
  auto g = scalar_model("uniform-max-power.g", power_support(), ParamBox::positive(), [dn, dk](double x, const auto& t) {
    return dn * (dn + dk) / dk * (1.0 - std::pow(x, dk) * pow(t, -dk)) * std::pow(x, dn - 1.0) * pow(t, -dn);
  });
  e.escort = EscortPair::make(std::move(f), std::move(g));
  e.statistic = statistic("(n+k)x^k/n", [dn, dk](double x) { return (dn + dk) * std::pow(x, dk) / dn; });
  e.statistic.target = closed("theta^k", [dk](const auto& t) { return pow(t, dk); });
  e.lambda = closed("(n+k)theta^k/(n+2k)", [dn, dk](const auto& t) { return pow(t, dk) * ((dn + dk) / (dn + 2.0 * dk)); });
  e.statistic.lambda_under_g = e.lambda;
  e.variance = closed("k^2 theta^(2k)/(n(n+2k))",
                      [dn, dk](const auto& t) { return pow(t, 2.0 * dk) * (dk * dk / (dn * (dn + 2.0 * dk))); });
  e.fisher = closed("n(n+k)^2/((n+2k)theta^2)",
                    [dn, dk](const auto& t) { return dn * (dn + dk) * (dn + dk) / ((dn + 2.0 * dk) * (t * t)); });
  e.bound = e.variance;
  e.notes = "maximum of n uniforms, estimating theta^k; variance from the moment identity E[X^m] = n theta^m/(n+m)";
  return e;
}

CatalogEntry gamma_scale(HyperReader& r) {
  const double alpha = r.real("alpha");
  const double kv = r.real("k");
  if (!(alpha > 0.0)) throw InvalidArgument("gamma-scale: alpha must be positive");
  if (kv != std::floor(kv) || kv == 0.0 || std::fabs(kv) > 50) {
    throw InvalidArgument("gamma-scale: k must be a nonzero integer");
  }
  const int k = static_cast<int>(kv);
  if (!(2.0 * k + alpha > 0.0)) throw InvalidArgument("gamma-scale: requires 2k + alpha > 0");

  // g(x, theta) = G(x / theta) / theta with G(y) = sum_i c_i y^e_i exp(-y) / C.
  std::vector<double> coef;
  std::vector<double> expo;
  if (k > 0) {
    double s = 1.0;
    for (int i = 0; i < k; ++i) {
      if (i > 0) s *= alpha + k - i;
      coef.push_back(s);
      expo.push_back(alpha + k - i - 2.0);
    }
  } else {
    double s = 1.0;
    for (int i = 1; i <= -k; ++i) {
      if (i > 1) s *= alpha - (i - 1);
      coef.push_back(s);
      expo.push_back(alpha - i - 1.0);
    }
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) norm += coef[i] * std::tgamma(expo[i] + 1.0);
  for (double& c : coef) c /= norm;

  CatalogEntry e;
  e.name = "gamma-scale";
  auto base = families::gamma_scale(alpha);
  base.name = "gamma-scale.f";
  auto support = base.support;
  auto g = scalar_model("gamma-scale.g", support, ParamBox::positive(), [coef, expo](double x, const auto& t) {
    if (!(x > 0.0)) return 0.0 * t;
    const auto y = x / t;
    auto acc = 0.0 * y;
    for (std::size_t i = 0; i < coef.size(); ++i) acc = acc + coef[i] * pow(y, expo[i]);
    return acc * exp(-1.0 * y) / t;
  });
  e.escort = EscortPair::make(std::move(base), std::move(g));
  const double scale = std::exp(std::lgamma(alpha) - std::lgamma(alpha + k));
  e.statistic = statistic("Gamma(alpha)/Gamma(alpha+k) x^k", [scale, k](double x) { return scale * std::pow(x, k); });
  const double dk = k;
  e.statistic.target = closed("theta^k", [dk](const auto& t) { return pow(t, dk); });
  double lam = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) lam += coef[i] * std::tgamma(expo[i] + k + 1.0);
  lam *= scale;
  e.lambda = closed("Gamma(alpha)/Gamma(alpha+k) theta^k sum_i c_i Gamma(e_i+k+1)/c",
                    [lam, dk](const auto& t) { return pow(t, dk) * lam; });
  e.statistic.lambda_under_g = e.lambda;
  const double vfac = std::exp(std::lgamma(alpha) + std::lgamma(2.0 * k + alpha) - 2.0 * std::lgamma(alpha + k)) - 1.0;
  e.variance = closed("[Gamma(alpha)Gamma(2k+alpha)/Gamma(alpha+k)^2 - 1] theta^(2k)",
                      [vfac, dk](const auto& t) { return pow(t, 2.0 * dk) * vfac; });
  e.bound = e.variance;
  e.notes =
      "gamma scale family; escort from the scale-family construction, normalized by summing Gamma(e_i+1) over the "
      "same index range as the kernel";
  return e;
}

CatalogEntry normal_x4(HyperReader&) {

  CatalogEntry e;
  e.name = "normal-x4";
  auto support = Support::continuous_1d([](ParamView) { return Interval{}; });
  auto f = scalar_model("normal-x4.f", support, ParamBox::positive(),
                        [](double x, const auto& t) { return exp(-0.5 * x * x / (t * t)) * kInvSqrt2Pi / t; });
  f.quantile = [](double u, ParamView t) { return t[0] * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0); };
  auto g = scalar_model("normal-x4.g", support, ParamBox::positive(), [](double x, const auto& t) {
    const auto q = x * x / (t * t);
    return (0.75 + 0.25 * q) * exp(-0.5 * q) * kInvSqrt2Pi / t;
  });
  e.escort = EscortPair::make(std::move(f), std::move(g));
  e.statistic = statistic("x^4/3", [](double x) { return x * x * x * x / 3.0; });
  e.statistic.target = closed("theta^4", [](const auto& t) { return pow(t, 4.0); });
  e.lambda = closed("2theta^4", [](const auto& t) { return 2.0 * pow(t, 4.0); });
  e.statistic.lambda_under_g = e.lambda;
  e.variance = closed("32theta^8/3", [](const auto& t) { return pow(t, 8.0) * (32.0 / 3.0); });
  e.fisher = closed("6/theta^2", [](const auto& t) { return 6.0 / (t * t); });
  e.bound = e.variance;
  e.notes = "N(0, theta^2); T is quadratic in the canonical statistic x^2";
  return e;
}

CatalogEntry poisson_pair(HyperReader& r) {
  const int n = r.integer("n", 1);
  const double dn = n;
  CatalogEntry e;
  e.name = "poisson-pair";
  auto pmf = [dn](double s, const auto& t) { return exp(s * log(dn * t) - dn * t - std::lgamma(s + 1.0)); };
  auto f = scalar_model("poisson-pair.f", Support::lattice(), ParamBox::positive(), pmf);
  auto g = scalar_model("poisson-pair.g", Support::lattice(), ParamBox::positive(),
                        [pmf, dn](double s, const auto& t) { return pmf(s, t) * (0.5 + s / (2.0 * dn * t)); });
  e.escort = EscortPair::make(std::move(f), std::move(g));
  e.statistic = statistic("s(s-1)/n^2", [dn](double s) { return s * (s - 1.0) / (dn * dn); });
  e.statistic.target = closed("theta^2", [](const auto& t) { return t * t; });
  e.lambda = closed("theta^2+theta/n", [dn](const auto& t) { return t * t + t / dn; });
  e.statistic.lambda_under_g = e.lambda;
  e.variance = closed("4theta^3/n+2theta^2/n^2",
                      [dn](const auto& t) { return 4.0 * t * t * t / dn + 2.0 * t * t / (dn * dn); });
  e.fisher = closed("(2n theta+1)/(2theta^2)", [dn](const auto& t) { return (2.0 * dn * t + 1.0) / (2.0 * t * t); });
  e.bound = e.variance;
  e.notes = "n Poisson draws reduced to the sum s ~ Poisson(n theta); g is the half-half mixture escort";
  return e;
}

CatalogEntry uniform_joint_max(HyperReader& r) {
  const int n = r.integer("n", 1);
  const double dn = n;
  CatalogEntry e;
  e.name = "uniform-joint-max";
  auto f = scalar_model("uniform-joint-max.f", power_support(), ParamBox::positive(),
                        [dn](double x, const auto& t) { return dn * std::pow(x, dn - 1.0) * pow(t, -dn); });
  f.quantile = [dn](double u, ParamView t) { return t[0] * std::pow(u, 1.0 / dn); };
  auto g = scalar_model("uniform-joint-max.g", power_support(), ParamBox::positive(), [dn](double x, const auto& t) {
    return dn * (dn + 1.0) * (1.0 - x / t) * std::pow(x, dn - 1.0) * pow(t, -dn);
  });
  e.escort = EscortPair::make(std::move(f), std::move(g));
  e.statistic = statistic("t", [](double x) { return x; });
  e.statistic.target = closed("n theta/(n+1)", [dn](const auto& t) { return t * (dn / (dn + 1.0)); });
  e.lambda = closed("n theta/(n+2)", [dn](const auto& t) { return t * (dn / (dn + 2.0)); });
  e.statistic.lambda_under_g = e.lambda;
  e.variance = closed("n theta^2/((n+1)^2(n+2))",
                      [dn](const auto& t) { return t * t * (dn / ((dn + 1.0) * (dn + 1.0) * (dn + 2.0))); });
  e.fisher = closed("n(n+1)^2/((n+2)theta^2)",
                    [dn](const auto& t) { return dn * (dn + 1.0) * (dn + 1.0) / ((dn + 2.0) * (t * t)); });
  e.bound = e.variance;
  e.notes = "n uniforms on [0, theta] reduced to t = max; g is a deformed exponential family with Z(u) = [1+u]_+";
  return e;
}

using Builder = CatalogEntry (*)(HyperReader&);

struct Registered {
  CatalogInfo info;
  Builder build;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> r = {
      {{"uniform-max", "n", "max of n U(0, theta); T = (n+1)X/n; attains the Naudts bound"}, uniform_max},
      {{"expmin", "n", "min of n shifted exponentials; T = X - 1/n; attains the Naudts bound"}, expmin},
      {{"uniform-max-power", "n k", "max of n U(0, theta); T = (n+k)X^k/n for theta^k"}, uniform_max_power},
      {{"gamma-scale", "alpha k", "Gamma(alpha) scale family; T = Gamma(alpha)X^k/Gamma(alpha+k) for theta^k"},
       gamma_scale},
      {{"normal-x4", "", "N(0, theta^2); T = X^4/3 for theta^4"}, normal_x4},
      {{"poisson-pair", "n", "n Poisson draws; T = Xbar(Xbar - 1/n) for theta^2"}, poisson_pair},
      {{"uniform-joint-max", "n", "n U(0, theta) draws; T = max; deformed exponential escort"}, uniform_joint_max},
  };
  return r;
}

}  // namespace

const std::vector<CatalogInfo>& catalog_index() {
  static const std::vector<CatalogInfo> index = [] {
    std::vector<CatalogInfo> out;
    for (const auto& r : registry()) out.push_back(r.info);
    return out;
  }();
  return index;
}

CatalogEntry catalog_lookup(std::string_view name, const Hyper& hyper) {
  for (const auto& r : registry()) {
    if (r.info.name != name) continue;
    HyperReader reader(name, hyper);
    CatalogEntry e = r.build(reader);
    e.hyper = reader.finish();
    e.reference_points = kReferencePoints;
    return e;
  }
  throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

}  // namespace infoineq
