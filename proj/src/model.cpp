#include "infoineq/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "infoineq/errors.hpp"

namespace infoineq {

bool ParamBox::contains(ParamView theta) const {
  if (theta.size() != coords.size()) return false;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!coords[i].contains_open(theta[i])) return false;
  }
  return true;
}

void ParamBox::require(ParamView theta) const {
  if (theta.size() != coords.size()) {
    throw DomainError("parameter has dimension " + std::to_string(theta.size()) + ", expected " +
                      std::to_string(coords.size()));
  }
  if (!contains(theta)) throw DomainError("parameter outside the open parameter domain");
}

double ModelSpec::density(Point x, ParamView theta) const {
  if (!support.contains(x, theta)) return 0.0;
  return pdf(x, theta);
}

double ModelSpec::density(double x, double theta) const {
  return density(Point(&x, 1), ParamView(&theta, 1));
}

std::optional<double> ModelSpec::analytic_partial(Point x, ParamView theta, const MultiIndex& index) const {
  if (!support.contains(x, theta)) return 0.0;
  if (theta_jet && param_dim == 1 && index.size() == 1 && index[0] <= Jet::kMaxOrder) {
    return theta_jet(x, theta[0], index[0]).derivative(index[0]);
  }
  if (partial) return partial(x, theta, index);
  return std::nullopt;
}

EscortPair EscortPair::make(ModelSpec f, ModelSpec g) {
  if (f.param_dim != g.param_dim) throw InvalidArgument("escort pair: parameter dimensions differ");
  if (f.domain.dim() != g.domain.dim()) throw InvalidArgument("escort pair: parameter domains differ");
  for (std::size_t i = 0; i < f.domain.dim(); ++i) {
    if (f.domain.coords[i].lo != g.domain.coords[i].lo || f.domain.coords[i].hi != g.domain.coords[i].hi) {
      throw InvalidArgument("escort pair: parameter domains differ");
    }
  }
  if (f.support.dim != g.support.dim || f.support.kind != g.support.kind) {
    throw InvalidArgument("escort pair: sample spaces differ");
  }
  return EscortPair{std::move(f), std::move(g), false};
}

EscortPair EscortPair::self(const ModelSpec& f) { return EscortPair{f, f, true}; }

namespace {

// Sample points covering an interval, with infinite ends reached through the
// same rational map the quadrature uses.
std::vector<double> sample_interval(Interval iv, int samples) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / (samples + 1);
    double x = 0.0;
    if (iv.finite()) {
      x = iv.lo + t * iv.width();
    } else if (std::isfinite(iv.lo)) {
      x = iv.lo + t / (1.0 - t);
    } else if (std::isfinite(iv.hi)) {
      x = iv.hi - (1.0 - t) / t;
    } else {
      const double s = 2.0 * t - 1.0;
      x = s / (1.0 - s * s);
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

std::size_t containment_violations(const EscortPair& pair, ParamView theta, int samples) {
  std::size_t bad = 0;
  const auto gbox = pair.g.support.at(theta);
  if (pair.g.support.kind == SupportKind::discrete) {
    for (int i = 0; i < samples; ++i) {
      const double x = pair.g.support.lattice_origin + pair.g.support.lattice_step * i;
      if (!gbox[0].contains(x)) break;
      if (pair.g.density(Point(&x, 1), theta) > 0.0 && !(pair.f.density(Point(&x, 1), theta) > 0.0)) ++bad;
    }
    return bad;
  }
  const int per_axis = gbox.size() == 1 ? samples : std::max(9, static_cast<int>(std::sqrt(samples)));
  std::vector<std::vector<double>> axes;
  for (const Interval& iv : gbox) axes.push_back(sample_interval(iv, per_axis));
  std::vector<double> x(gbox.size());
  std::vector<std::size_t> idx(gbox.size(), 0);
  while (true) {
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = axes[c][idx[c]];
    const Point px(x.data(), x.size());
    if (pair.g.density(px, theta) > 0.0 && !(pair.f.density(px, theta) > 0.0)) ++bad;
    std::size_t c = 0;
    while (c < idx.size() && ++idx[c] == axes[c].size()) idx[c++] = 0;
    if (c == idx.size()) break;
  }
  return bad;
}

double normalization_check(const ModelSpec& m, ParamView theta, const QuadratureSettings& settings) {
  m.domain.require(theta);
  const QuadResult r = integrate([&](Point x) { return m.density(x, theta); }, m.support, theta, settings);
  return std::fabs(r.value - 1.0);
}

double expectation(const ModelSpec& m, const std::function<double(Point)>& fn, ParamView theta,
                   const QuadratureSettings& settings) {
  m.domain.require(theta);
  return integrate([&](Point x) { return fn(x) * m.density(x, theta); }, m.support, theta, settings).value;
}

VarianceResult variance_of(const Statistic& t, const ModelSpec& m, ParamView theta,
                           const QuadratureSettings& settings) {
  m.domain.require(theta);
  VarianceResult out;
  const QuadResult mean = integrate([&](Point x) { return t(x) * m.density(x, theta); }, m.support, theta, settings);
  out.mean = mean.value;
  QuadResult second;
  try {
    second = integrate(
        [&](Point x) {
          const double d = t(x) - out.mean;
          return d * d * m.density(x, theta);
        },
        m.support, theta, settings);
  } catch (const QuadratureError& e) {
    throw DivergentMoment(std::string("second moment of ") + t.name + " looks divergent: " + e.what());
  }
  out.value = second.value;
  out.error = second.error + 2.0 * std::fabs(mean.error * out.mean);
  out.truncation = std::max(mean.truncation, second.truncation);
  return out;
}

double unbiasedness_check(const CatalogEntry& entry, ParamView theta, const QuadratureSettings& settings) {
  if (!entry.statistic.target) throw InvalidArgument("statistic has no closed-form target");
  return std::fabs(expectation(entry.escort.f, entry.statistic.eval, theta, settings) - entry.statistic.target(theta));
}

namespace families {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double hermite(int m, double y) {
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = y;
  for (int k = 1; k < m; ++k) {
    const double next = y * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

ModelSpec gaussian_single() {
  ModelSpec m;
  m.name = "gaussian-single";
  m.param_dim = 2;
  m.domain = {{Interval{}, Interval{0.0, kInf}}};
  m.support = Support::continuous_1d([](ParamView) { return Interval{}; });
  m.pdf = [](Point x, ParamView t) {
    const double z = x[0] - t[0];
    return kInvSqrt2Pi / std::sqrt(t[1]) * std::exp(-0.5 * z * z / t[1]);
  };
  // d^a_mu d^b_v f = 2^-b d^(a+2b)_mu f, and d^m_mu f = v^(-m/2) He_m(z / sqrt v) f.
  m.partial = [pdf = m.pdf](Point x, ParamView t, const MultiIndex& idx) -> std::optional<double> {
    const int order = idx[0] + 2 * idx[1];
    const double sv = std::sqrt(t[1]);
    const double y = (x[0] - t[0]) / sv;
    return std::ldexp(1.0, -idx[1]) * std::pow(sv, -order) * hermite(order, y) * pdf(x, t);
  };
  m.quantile = [](double u, ParamView t) {
    return t[0] + std::sqrt(2.0 * t[1]) * boost::math::erf_inv(2.0 * u - 1.0);
  };
  return m;
}

ModelSpec gaussian_sample(int n) {
  if (n < 2) throw InvalidArgument("gaussian-sample needs n >= 2");
  ModelSpec m;
  m.name = "gaussian-sample";
  m.param_dim = 2;
  m.domain = {{Interval{}, Interval{0.0, kInf}}};
  m.support.dim = 2;
  m.support.bounds = [](ParamView) { return std::vector<Interval>{Interval{}, Interval{0.0, kInf}}; };
  const double dn = n;
  const double dof = n - 1.0;
  const double log_norm_chi = -0.5 * dof * std::log(2.0) - std::lgamma(0.5 * dof);
  m.pdf = [dn, dof, log_norm_chi](Point x, ParamView t) {
    const double z = x[0] - t[0];
    const double mean_part = kInvSqrt2Pi * std::sqrt(dn / t[1]) * std::exp(-0.5 * dn * z * z / t[1]);
    if (!(x[1] > 0.0)) return 0.0;
    const double y = dof * x[1] / t[1];
    const double chi = std::exp(log_norm_chi + (0.5 * dof - 1.0) * std::log(y) - 0.5 * y);
    return mean_part * chi * dof / t[1];
  };
  m.partial = [pdf = m.pdf, dn, dof](Point x, ParamView t, const MultiIndex& idx) -> std::optional<double> {
    if (idx[0] + idx[1] != 1) return std::nullopt;
    const double z = x[0] - t[0];
    const double v = t[1];
    if (idx[0] == 1) return pdf(x, t) * dn * z / v;
    return pdf(x, t) * (-0.5 * dn / v + (dn * z * z + dof * x[1]) / (2.0 * v * v));
  };
  return m;
}

ModelSpec gaussian_location(double sigma) {
  ModelSpec m;
  m.name = "gaussian-location";
  m.domain = ParamBox::real();
  m.support = Support::continuous_1d([](ParamView) { return Interval{}; });
  auto density = [sigma](double x, const auto& theta) {
    const auto z = (x - theta) / sigma;
    return exp(-0.5 * z * z) * (kInvSqrt2Pi / sigma);
  };
  m.pdf = [density](Point x, ParamView t) { return density(x[0], t[0]); };
  m.theta_jet = [density](Point x, double t, int order) { return density(x[0], Jet::variable(t, order)); };
  m.quantile = [sigma](double u, ParamView t) {
    return t[0] + sigma * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
  };
  return m;
}

ModelSpec poisson() {
  ModelSpec m;
  m.name = "poisson";
  m.domain = ParamBox::positive();
  m.support = Support::lattice();
  auto pmf = [](double x, const auto& theta) { return exp(x * log(theta) - theta - std::lgamma(x + 1.0)); };
  m.pdf = [pmf](Point x, ParamView t) { return pmf(x[0], t[0]); };
  m.theta_jet = [pmf](Point x, double t, int order) { return pmf(x[0], Jet::variable(t, order)); };
  return m;
}

ModelSpec gamma_scale(double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("gamma shape must be positive");
  ModelSpec m;
  m.name = "gamma";
  m.domain = ParamBox::positive();
  m.support = Support::continuous_1d([](ParamView) { return Interval{0.0, kInf}; });
  const double lg = std::lgamma(alpha);
  auto density = [alpha, lg](double x, const auto& theta) {
    return exp((alpha - 1.0) * std::log(x) - x / theta - lg - alpha * log(theta));
  };
  m.pdf = [density](Point x, ParamView t) { return x[0] > 0.0 ? density(x[0], t[0]) : 0.0; };
  m.theta_jet = [density](Point x, double t, int order) { return density(x[0], Jet::variable(t, order)); };
  m.quantile = [alpha](double u, ParamView t) { return t[0] * boost::math::gamma_p_inv(alpha, u); };
  return m;
}

}  // namespace families

}  // namespace infoineq
