#include "infoineq/escort.hpp"

#include <algorithm>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <cmath>
#include <iomanip>
#include <limits>

#include "infoineq/errors.hpp"

namespace infoineq {

namespace {

constexpr double kSignTolerance = 1e-12;
constexpr double kTailRatio = 1e-16;
constexpr int kMaxDoublings = 60;
constexpr int kMaxDepth = 40;
constexpr double kFloor = 1e-14;

QuadratureSettings tight() {
  QuadratureSettings s;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-13;
  s.max_subdivisions = 4000;
  return s;
}

std::vector<double> breaks_inside(const std::vector<double>& breaks, double a, double b) {
  std::vector<double> out;
  for (double v : breaks) {
    if (v > a && v < b) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Integrand (phi - T) f of the synthesis ODE, with removable singularities
// at the support ends evaluated by a nudge toward the interior.
class Integrand {
 public:
  Integrand(const BaseDensity& f, const Statistic& t, double phi) : f_(f), t_(t), phi_(phi) {}

  double operator()(double u) const {
    double v = raw(u);
    if (std::isfinite(v)) return v;
    const double mid = f_.support.finite() ? 0.5 * (f_.support.lo + f_.support.hi)
                       : std::isfinite(f_.support.lo) ? f_.support.lo + 1.0
                       : std::isfinite(f_.support.hi) ? f_.support.hi - 1.0
                                                       : 0.0;
    const double nudge = 1e-9 * std::max(1.0, std::fabs(u));
    v = raw(u + (mid > u ? nudge : -nudge));
    return std::isfinite(v) ? v : 0.0;
  }

  double density(double u) const { return f_.support.contains(u) ? f_.pdf(u) : 0.0; }

 private:
  double raw(double u) const {
    const double fu = density(u);
    if (fu == 0.0) return 0.0;
    return (phi_ - t_(u)) * fu;
  }

  const BaseDensity& f_;
  const Statistic& t_;
  double phi_;
};

double tail_end(const Integrand& q, double start, double direction) {
  double peak = std::fabs(q(start));
  double step = 1.0;
  int quiet = 0;
  double first = start;
  for (int i = 0; i < kMaxDoublings; ++i, step *= 2.0) {
    const double x = start + direction * step;
    const double v = std::fabs(q(x)) * (1.0 + x * x);
    peak = std::max(peak, std::fabs(q(x)));
    if (v <= kTailRatio * peak && q.density(x) * (1.0 + x * x) <= kTailRatio) {
      if (quiet++ == 0) first = x;
      if (quiet >= 2) return first;
    } else {
      quiet = 0;
    }
  }
  throw NoValidEscort("escort synthesis: the integrand does not decay; kernel integral looks divergent");
}

struct Node {
  double x;
  double h;
  double v;
  double d;
};

class Tabulator {
 public:
  Tabulator(const Integrand& q, FamilyRule rule, const SynthGrid& grid, std::vector<double> breaks)
      : q_(q), rule_(rule), grid_(grid), breaks_(std::move(breaks)) {}

  double integral(double a, double b) const {
    if (a == b) return 0.0;
    const auto inner = breaks_inside(breaks_, std::min(a, b), std::max(a, b));
    const double v = integrate_interval(q_, {std::min(a, b), std::max(a, b)}, inner, tight()).value;
    return a < b ? v : -v;
  }

  Node make(double x, double h) const {
    const double d = q_(x);
    if (rule_ == FamilyRule::location_shift) return {x, h, h, d};
    if (x == 0.0) {
      const double delta = 1e-4;
      const auto k_at = [&](double u) { return (h + integral(0.0, u)) / u; };
      double slope;
      if (q_.density(-delta) > 0.0 || q_.density(-2 * delta) > 0.0) {
        slope = (k_at(delta) - k_at(-delta)) / (2 * delta);
      } else {
        slope = (-3.0 * d + 4.0 * k_at(delta) - k_at(2 * delta)) / (2 * delta);
      }
      return {x, h, d, slope};
    }
    return {x, h, h / x, (d * x - h) / (x * x)};
  }

  // h is accumulated from the left up to the peak of |h| and from the right
  // anchor h_b beyond it.
  std::vector<Node> run(double a, double b, double h_a, double h_b) {
    std::vector<double> xs;
    const int n = std::max(grid_.initial_points, 2);
    for (int i = 0; i < n; ++i) xs.push_back(a + (b - a) * i / (n - 1));
    for (double v : breaks_inside(breaks_, a, b)) xs.push_back(v);
    if (rule_ == FamilyRule::scale && a < 0.0 && b > 0.0) xs.push_back(0.0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> hs(xs.size());
    std::vector<double> pieces(xs.size(), 0.0);
    hs[0] = h_a;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      pieces[i] = integral(xs[i - 1], xs[i]);
      hs[i] = hs[i - 1] + pieces[i];
    }
    std::size_t peak = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::fabs(hs[i]) > std::fabs(hs[peak])) peak = i;
    }
    split_ = xs[peak];
    double right = h_b;
    for (std::size_t i = xs.size() - 1; i > peak; --i) {
      hs[i] = right;
      right -= pieces[i];
    }

    std::vector<Node> coarse;
    for (std::size_t i = 0; i < xs.size(); ++i) coarse.push_back(make(xs[i], hs[i]));
    scale_ = 0.0;
    for (const auto& nd : coarse) scale_ = std::max(scale_, std::fabs(nd.v));
    if (scale_ == 0.0 || !std::isfinite(scale_)) return coarse;

    std::vector<Node> out{coarse.front()};
    for (std::size_t i = 1; i < coarse.size(); ++i) refine(coarse[i - 1], coarse[i], 0, out);
    return out;
  }

 private:
  static double hermite(const Node& l, const Node& r, double x) {
    const double w = r.x - l.x;
    const double t = (x - l.x) / w;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * l.v + (t3 - 2 * t2 + t) * w * l.d + (-2 * t3 + 3 * t2) * r.v +
           (t3 - t2) * w * r.d;
  }

  void refine(const Node& l, const Node& r, int depth, std::vector<Node>& out) {
    const double xm = 0.5 * (l.x + r.x);
    const bool room = depth < kMaxDepth && static_cast<int>(out.size()) < grid_.max_points &&
                      xm > l.x && xm < r.x;
    if (room) {
      const double h = xm > split_ ? r.h - integral(xm, r.x) : l.h + integral(l.x, xm);
      const Node m = make(xm, h);
      if (std::fabs(m.v - hermite(l, r, xm)) > grid_.tolerance * std::max(std::fabs(m.v), kFloor * scale_)) {
        refine(l, m, depth + 1, out);
        refine(m, r, depth + 1, out);
        return;
      }
    }
    out.push_back(r);
  }

  const Integrand& q_;
  FamilyRule rule_;
  SynthGrid grid_;
  std::vector<double> breaks_;
  double scale_ = 0.0;
  double split_ = 0.0;
};

SynthesizedDensity synthesize(const BaseDensity& f, const Statistic& t, double phi, const SynthGrid& grid,
                              FamilyRule rule) {
  if (!f.pdf || !t.eval) throw InvalidArgument("escort synthesis: density and statistic are required");
  if (grid.tolerance <= 0.0 || grid.max_points < 2) throw InvalidArgument("escort synthesis: invalid grid");
  const Integrand q(f, t, phi);
  const Interval s = f.support;
  const double x0 = s.lo;

  if (rule == FamilyRule::scale && std::isfinite(x0)) {
    double fmax = 0.0;
    for (int i = 1; i <= 64; ++i) {
      const double u = std::isfinite(s.hi) ? x0 + (s.hi - x0) * i / 65.0 : x0 + i * 0.25;
      fmax = std::max(fmax, q.density(u));
    }
    const double edge = q.density(x0 + 1e-9 * std::max(1.0, std::fabs(x0)));
    if (std::fabs(x0) * edge > kSignTolerance * std::max(fmax, 1e-300)) {
      throw NoValidEscort("scale synthesis: boundary term x0 g(x0) does not vanish");
    }
  }

  double a = grid.lo;
  double b = grid.hi;
  if (std::isnan(a)) {
    a = std::isfinite(s.lo) ? s.lo : tail_end(q, std::isfinite(s.hi) ? std::min(s.hi, 0.0) : 0.0, -1.0);
  }
  if (std::isnan(b)) {
    b = std::isfinite(s.hi) ? s.hi : tail_end(q, std::isfinite(s.lo) ? std::max(s.lo, 0.0) : 0.0, 1.0);
  }
  if (!(a < b) || a < s.lo || b > s.hi) throw InvalidArgument("escort synthesis: grid range must lie in the support");

  Tabulator tab(q, rule, grid, f.breaks);
  const double h_a = std::isfinite(x0) ? tab.integral(x0, a)
                                       : integrate_interval(q, {-kInf, a}, breaks_inside(f.breaks, -kInf, a), tight()).value;
  const double h_left = h_a + tab.integral(a, b);
  double h_b = h_left;
  if (!std::isfinite(s.hi)) {
    try {
      h_b = -integrate_interval(q, {b, kInf}, breaks_inside(f.breaks, b, kInf), tight()).value;
    } catch (const QuadratureError&) {
      throw NoValidEscort("escort synthesis: kernel integral diverges");
    }
  }
  auto nodes = tab.run(a, b, h_a, h_b);

  double vmax = 0.0;
  double vmin = 0.0;
  for (const auto& nd : nodes) {
    vmax = std::max(vmax, nd.v);
    vmin = std::min(vmin, nd.v);
  }
  const double scale = std::max(vmax, -vmin);
  if (!(scale > 0.0) || !std::isfinite(scale)) throw NoValidEscort("escort synthesis: kernel vanishes; no valid escort");
  const double sign = vmax >= -vmin ? 1.0 : -1.0;
  if (sign * (sign > 0 ? vmin : vmax) < -kSignTolerance * scale) {
    throw NoValidEscort("escort synthesis: kernel changes sign on the support; no valid escort");
  }
  if (rule == FamilyRule::scale && a < 0.0 && b > 0.0) {
    const auto zero = std::find_if(nodes.begin(), nodes.end(), [](const Node& nd) { return nd.x == 0.0; });
    if (zero != nodes.end() && std::fabs(zero->h) > 1e-9 * scale) {
      throw NoValidEscort("scale synthesis: h(0) does not vanish; kernel diverges at 0");
    }
  }
  const bool open_right = !std::isfinite(s.hi);
  const bool open_left = !std::isfinite(s.lo);
  const double residual = rule == FamilyRule::scale ? (h_left - h_b) / b : h_left - h_b;
  if ((open_right && std::fabs(residual) > 1e-8 * scale) ||
      (open_left && std::fabs(nodes.front().v) > 1e-8 * scale)) {
    throw NoValidEscort("escort synthesis: kernel does not return to zero; its integral diverges");
  }

  std::vector<double> x;
  std::vector<double> k;
  std::vector<double> dk;
  for (const auto& nd : nodes) {
    x.push_back(nd.x);
    k.push_back(std::max(0.0, sign * nd.v));
    dk.push_back(sign * nd.d);
  }
  return SynthesizedDensity(f.name, rule, std::move(x), std::move(k), std::move(dk), x0, sign);
}

}  // namespace

struct SynthesizedDensity::Interp {
  boost::math::interpolators::cubic_hermite<std::vector<double>> spline;
};

SynthesizedDensity::SynthesizedDensity(std::string base_name, FamilyRule rule, std::vector<double> x,
                                       std::vector<double> kernel, std::vector<double> slope, double x0, double sign)
    : base_name_(std::move(base_name)),
      rule_(rule),
      x_(std::move(x)),
      k_(std::move(kernel)),
      dk_(std::move(slope)),
      x0_(x0),
      sign_(sign) {
  if (x_.size() < 2 || k_.size() != x_.size() || dk_.size() != x_.size()) {
    throw InvalidArgument("synthesized density: tabulation needs matching nodes, values and slopes");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < x_.size(); ++i) {
    const double w = x_[i] - x_[i - 1];
    total += 0.5 * w * (k_[i - 1] + k_[i]) + w * w / 12.0 * (dk_[i - 1] - dk_[i]);
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw NoValidEscort("synthesized density: kernel integral is not positive");
  normalizer_ = 1.0 / total;
  interp_ = std::make_shared<const Interp>(Interp{{std::vector<double>(x_), std::vector<double>(k_), std::vector<double>(dk_)}});
}

double SynthesizedDensity::kernel(double x) const {
  if (!(x >= x_.front() && x <= x_.back())) return 0.0;
  return std::max(0.0, interp_->spline(x));
}

double SynthesizedDensity::kernel_prime(double x) const {
  if (!(x >= x_.front() && x <= x_.back())) return 0.0;
  return interp_->spline.prime(x);
}

double SynthesizedDensity::density(double x, double theta) const {
  if (rule_ == FamilyRule::location_shift) return g(x - theta);
  return g(x / theta) / theta;
}

double SynthesizedDensity::density_theta(double x, double theta) const {
  if (rule_ == FamilyRule::location_shift) return -g_prime(x - theta);
  const double y = x / theta;
  return -(g(y) + y * g_prime(y)) / (theta * theta);
}

ModelSpec SynthesizedDensity::model(const ParamBox& domain) const {
  if (domain.dim() != 1) throw InvalidArgument("synthesized density: scalar parameter domain required");
  auto self = std::make_shared<const SynthesizedDensity>(*this);
  ModelSpec m;
  m.name = "escort(" + base_name_ + ")";
  m.domain = domain;
  const Interval r = range();
  if (rule_ == FamilyRule::location_shift) {
    m.support = Support::continuous_1d([r](ParamView t) { return Interval{r.lo + t[0], r.hi + t[0]}; });
  } else {
    m.support = Support::continuous_1d([r](ParamView t) { return Interval{r.lo * t[0], r.hi * t[0]}; });
  }
  m.pdf = [self](Point x, ParamView t) { return self->density(x[0], t[0]); };
  m.partial = [self](Point x, ParamView t, const MultiIndex& i) -> std::optional<double> {
    if (i.size() == 1 && i[0] == 1) return self->density_theta(x[0], t[0]);
    if (i.size() == 1 && i[0] == 0) return self->density(x[0], t[0]);
    return std::nullopt;
  };
  return m;
}

void SynthesizedDensity::write_csv(std::ostream& out) const {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "x,kernel,g\n" << std::setprecision(17);
  for (std::size_t i = 0; i < x_.size(); ++i) out << x_[i] << ',' << k_[i] << ',' << normalizer_ * k_[i] << '\n';
  out.flags(flags);
  out.precision(precision);
}

SynthesizedDensity synth_location(const BaseDensity& f, const Statistic& t, double phi0, const SynthGrid& grid) {
  return synthesize(f, t, phi0, grid, FamilyRule::location_shift);
}

SynthesizedDensity synth_scale(const BaseDensity& f, const Statistic& t, double phi1, const SynthGrid& grid) {
  return synthesize(f, t, phi1, grid, FamilyRule::scale);
}

ModelSpec location_model(const BaseDensity& f, const ParamBox& domain) {
  ModelSpec m;
  m.name = f.name;
  m.domain = domain;
  const Interval s = f.support;
  m.support = Support::continuous_1d([s](ParamView t) { return Interval{s.lo + t[0], s.hi + t[0]}; });
  m.support.breakpoints = [b = f.breaks](ParamView t) {
    auto out = b;
    for (auto& v : out) v += t[0];
    return out;
  };
  m.pdf = [pdf = f.pdf](Point x, ParamView t) { return pdf(x[0] - t[0]); };
  return m;
}

ModelSpec scale_model(const BaseDensity& f) {
  ModelSpec m;
  m.name = f.name;
  m.domain = ParamBox::positive();
  const Interval s = f.support;
  m.support = Support::continuous_1d([s](ParamView t) { return Interval{s.lo * t[0], s.hi * t[0]}; });
  m.support.breakpoints = [b = f.breaks](ParamView t) {
    auto out = b;
    for (auto& v : out) v *= t[0];
    return out;
  };
  m.pdf = [pdf = f.pdf](Point x, ParamView t) { return pdf(x[0] / t[0]) / t[0]; };
  return m;
}

std::vector<double> DeformedFamily::breaks(double theta, double c) const {
  if (!kinks) return {};
  return breaks_inside(kinks(theta, c), support.lo, support.hi);
}

double DeformedFamily::phi(double theta) const {
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->phi.find(theta); it != cache_->phi.end()) return it->second;
  }
  domain.require(ParamView(&theta, 1));
  const auto mass = [&](double c) {
    const auto inner = breaks(theta, c);
    const auto fn = [&](double x) {
      const double w = weight ? weight(x) : 1.0;
      return w == 0.0 ? 0.0 : w * Z(theta * T(x) - c);
    };
    try {
      return integrate_interval(fn, support, inner, quad).value - 1.0;
    } catch (const QuadratureError&) {
      return kInf;
    }
  };
  double lo = 0.0;
  double hi = 0.0;
  double m0 = mass(0.0);
  if (m0 == 0.0) return 0.0;
  double step = 1.0;
  bool bracketed = false;
  for (int i = 0; i < 200 && !bracketed; ++i, step *= 2.0) {
    if (m0 > 0.0) {
      lo = hi;
      hi = step;
      bracketed = mass(hi) <= 0.0;
    } else {
      hi = lo;
      lo = -step;
      bracketed = mass(lo) >= 0.0;
    }
  }
  if (!bracketed) throw SolverError("deformed family: could not bracket the normalizer phi");
  double c = 0.5 * (lo + hi);
  for (int i = 0; i < 400; ++i) {
    c = 0.5 * (lo + hi);
    const double m = mass(c);
    if (std::fabs(m) <= 1e-12 || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(c))) break;
    (m > 0.0 ? lo : hi) = c;
  }
  std::lock_guard lock(cache_->mutex);
  cache_->phi[theta] = c;
  return c;
}

double DeformedFamily::g(double x, double theta) const {
  if (!support.contains(x)) return 0.0;
  return Z(theta * T(x) - phi(theta));
}

double DeformedFamily::h_F(double theta) const {
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->h.find(theta); it != cache_->h.end()) return it->second;
  }
  const double c = phi(theta);
  const auto fn = [&](double x) {
    const double gx = Z(theta * T(x) - c);
    if (!(gx > 0.0)) return 0.0;
    const double w = weight ? weight(x) : 1.0;
    return w / F_prime(gx);
  };
  double h;
  try {
    h = integrate_interval(fn, support, breaks(theta, c), quad).value;
  } catch (const QuadratureError&) {
    throw DivergentMoment("deformed family: h_F diverges");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw DivergentMoment("deformed family: h_F is not finite and positive");
  std::lock_guard lock(cache_->mutex);
  cache_->h[theta] = h;
  return h;
}

double DeformedFamily::inverse_residual(double u_max, int points) const {
  double worst = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double u = u_max * i / points;
    worst = std::max(worst, std::fabs(Z(F(u)) - u));
  }
  return worst;
}

std::function<double(double)> f_escort(const DeformedFamily& d, double theta) {
  const double c = d.phi(theta);
  const double h = d.h_F(theta);
  return [d, theta, c, h](double x) {
    if (!d.support.contains(x)) return 0.0;
    const double gx = d.Z(theta * d.T(x) - c);
    if (!(gx > 0.0)) return 0.0;
    const double w = d.weight ? d.weight(x) : 1.0;
    return w / (d.F_prime(gx) * h);
  };
}

EscortPair deformed_pair(const DeformedFamily& d) {
  const auto support = [&d] {
    Support s = Support::continuous_1d([iv = d.support](ParamView) { return iv; });
    s.breakpoints = [d](ParamView t) { return d.kinks ? breaks_inside(d.kinks(t[0], d.phi(t[0])), d.support.lo, d.support.hi) : std::vector<double>{}; };
    return s;
  };
  ModelSpec f;
  f.name = d.name + ":F-escort";
  f.domain = d.domain;
  f.support = support();
  f.pdf = [d](Point x, ParamView t) { return f_escort(d, t[0])(x[0]); };

  auto eta_cache = std::make_shared<std::pair<std::mutex, std::map<double, double>>>();
  const auto eta = [d, f, eta_cache](double theta) {
    {
      std::lock_guard lock(eta_cache->first);
      if (auto it = eta_cache->second.find(theta); it != eta_cache->second.end()) return it->second;
    }
    const double v = expectation(f, [&](Point x) { return d.T(x); }, ParamView(&theta, 1), d.quad);
    std::lock_guard lock(eta_cache->first);
    eta_cache->second[theta] = v;
    return v;
  };

  ModelSpec g;
  g.name = d.name;
  g.domain = d.domain;
  g.support = support();
  g.pdf = [d](Point x, ParamView t) {
    const double w = d.weight ? d.weight(x[0]) : 1.0;
    return w == 0.0 ? 0.0 : w * d.g(x[0], t[0]);
  };
  g.partial = [d, eta](Point x, ParamView t, const MultiIndex& i) -> std::optional<double> {
    if (i.size() != 1 || i[0] != 1) return std::nullopt;
    const double gx = d.g(x[0], t[0]);
    if (!(gx > 0.0)) return 0.0;
    const double w = d.weight ? d.weight(x[0]) : 1.0;
    return w * (d.T(x) - eta(t[0])) / d.F_prime(gx);
  };
  return EscortPair::make(std::move(f), std::move(g));
}

namespace deformed {

namespace {

DeformedFamily linear_base(std::string name) {
  DeformedFamily d;
  d.name = std::move(name);
  d.F = [](double u) { return u - 1.0; };
  d.F_prime = [](double) { return 1.0; };
  d.Z = [](double u) { return std::max(0.0, 1.0 + u); };
  d.T.name = "x";
  d.T.eval = [](Point x) { return x[0]; };
  d.kinks = [](double theta, double c) {
    if (theta == 0.0) return std::vector<double>{};
    return std::vector<double>{(c - 1.0) / theta};
  };
  d.quad = tight();
  return d;
}

}  // namespace

DeformedFamily uniform_max(int n) {
  if (n < 1) throw InvalidArgument("deformed uniform-max: n must be >= 1");
  DeformedFamily d = linear_base("deformed-uniform-max");
  d.T.name = "t";
  d.support = {0.0, kInf};
  d.weight = [n](double t) { return n * std::pow(t, n - 1); };
  d.domain = ParamBox{{Interval{-kInf, 0.0}}};
  return d;
}

double uniform_max_canonical(int n, double theta) { return -(n + 1) / std::pow(theta, n + 1); }

DeformedFamily linear(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("deformed linear: b must be finite and positive");
  DeformedFamily d = linear_base("deformed-linear");
  d.support = {0.0, b};
  return d;
}

DeformedFamily logarithmic(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("deformed logarithmic: b must be finite and positive");
  DeformedFamily d;
  d.name = "exponential";
  d.F = [](double u) { return std::log(u); };
  d.F_prime = [](double u) { return 1.0 / u; };
  d.Z = [](double u) { return std::exp(u); };
  d.T.name = "x";
  d.T.eval = [](Point x) { return x[0]; };
  d.support = {0.0, b};
  d.quad = tight();
  return d;
}

}  // namespace deformed

}  // namespace infoineq
