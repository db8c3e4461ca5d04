#include "infoineq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "infoineq/errors.hpp"

namespace infoineq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double open_uniform(std::uint64_t r) { return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53; }

struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

double tail_point(const ModelSpec& m, ParamView theta, double start, double direction) {
  double step = 1.0;
  int quiet = 0;
  for (int i = 0; i < 64; ++i, step *= 2.0) {
    const double x = start + direction * step;
    const double v = m.density(x, theta[0]) * (1.0 + std::fabs(x));
    if (v <= 1e-17) {
      if (++quiet >= 2) return x;
    } else {
      quiet = 0;
    }
  }
  throw InvalidArgument("sampler: density tail does not decay");
}

Sampler cdf_inversion(const ModelSpec& m, ParamView theta) {
  const Interval s = m.support.at(theta)[0];
  const double a = std::isfinite(s.lo) ? s.lo : tail_point(m, theta, std::isfinite(s.hi) ? std::min(s.hi, 0.0) : 0.0, -1.0);
  const double b = std::isfinite(s.hi) ? s.hi : tail_point(m, theta, std::isfinite(s.lo) ? std::max(s.lo, 0.0) : 0.0, 1.0);
  constexpr int kCells = 4096;
  std::vector<double> x;
  for (int i = 0; i <= kCells; ++i) x.push_back(a + (b - a) * i / kCells);
  for (double v : m.support.breaks(theta)) {
    if (v > a && v < b) x.push_back(v);
  }
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());

  const double t = theta[0];
  const auto pdf = [&m, t](double v) {
    const double p = m.density(v, t);
    return std::isfinite(p) ? p : 0.0;
  };
  QuadratureSettings q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-12;
  std::vector<double> cdf(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) cdf[i] = cdf[i - 1] + integrate_interval(pdf, {x[i - 1], x[i]}, {}, q).value;
  const double total = cdf.back();
  if (!(total > 0.0)) throw InvalidArgument("sampler: density has no mass");
  std::vector<double> slope(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    cdf[i] /= total;
    const double nudge = 1e-12 * std::max(1.0, std::fabs(x[i]));
    slope[i] = pdf(i == 0 ? x[i] + nudge : i + 1 == x.size() ? x[i] - nudge : x[i]) / total;
  }
  return [x = std::move(x), cdf = std::move(cdf), slope = std::move(slope)](double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1, cdf.size() - 1);
    const double x0 = x[j - 1];
    const double w = x[j] - x0;
    const auto hermite = [&](double r) {
      const double r2 = r * r;
      const double r3 = r2 * r;
      return (2 * r3 - 3 * r2 + 1) * cdf[j - 1] + (r3 - 2 * r2 + r) * w * slope[j - 1] + (-2 * r3 + 3 * r2) * cdf[j] +
             (r3 - r2) * w * slope[j];
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int k = 0; k < 52; ++k) {
      const double mid = 0.5 * (lo + hi);
      (hermite(mid) < u ? lo : hi) = mid;
    }
    return x0 + 0.5 * (lo + hi) * w;
  };
}

Sampler lattice_search(const ModelSpec& m, ParamView theta) {
  const Interval s = m.support.at(theta)[0];
  const double origin = std::max(m.support.lattice_origin, s.lo);
  const double step = m.support.lattice_step;
  const double t = theta[0];
  std::vector<double> pmf;
  double mass = 0.0;
  double peak = 0.0;
  for (long i = 0; i < 10'000'000; ++i) {
    const double x = origin + step * static_cast<double>(i);
    if (x > s.hi) break;
    const double p = m.density(x, t);
    pmf.push_back(p);
    mass += p;
    peak = std::max(peak, p);
    if (p < peak && p <= 1e-18 * mass && mass > 0.0) break;
  }
  if (!(mass > 0.0)) throw InvalidArgument("sampler: lattice has no mass");
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i] / mass;
    cdf[i] = acc;
  }
  const std::size_t mode = static_cast<std::size_t>(std::max_element(pmf.begin(), pmf.end()) - pmf.begin());
  return [cdf = std::move(cdf), mode, origin, step](double u) {
    std::size_t i = mode;
    if (u <= cdf[i]) {
      while (i > 0 && u <= cdf[i - 1]) --i;
    } else {
      while (i + 1 < cdf.size() && u > cdf[i]) ++i;
    }
    return origin + step * static_cast<double>(i);
  };
}

Statistic under_f(Statistic t) {
  t.lambda_under_g = {};
  return t;
}

struct DefaultEntry {
  const char* name;
  Hyper hyper;
};

const std::vector<DefaultEntry>& default_entries() {
  static const std::vector<DefaultEntry> entries = {
      {"uniform-max", {{"n", 5}}},
      {"expmin", {{"n", 3}}},
      {"uniform-max-power", {{"n", 3}, {"k", 2}}},
      {"gamma-scale", {{"alpha", 3}, {"k", -1}}},
      {"normal-x4", {}},
      {"poisson-pair", {{"n", 2}}},
      {"uniform-joint-max", {{"n", 4}}},
  };
  return entries;
}

}  // namespace

const char* to_string(McMethod m) {
  switch (m) {
    case McMethod::automatic:
      return "auto";
    case McMethod::inverse_cdf:
      return "inverse-cdf";
    case McMethod::direct:
      return "direct";
  }
  return "auto";
}

void McSettings::validate() const {
  if (sample_count < 1000) throw InvalidArgument("mc: sample_count must be >= 1000");
}

bool McEstimate::agrees(double reference, double k) const { return std::fabs(mean - reference) <= k * std_error; }

Sampler make_sampler(const ModelSpec& m, ParamView theta, McMethod method, std::string* resolved) {
  if (m.support.dim != 1 || m.param_dim != 1) throw InvalidArgument("mc: no sampler wired for " + m.name);
  m.domain.require(theta);
  if (m.support.kind == SupportKind::discrete) {
    if (method == McMethod::inverse_cdf) throw InvalidArgument("mc: lattice models use direct sampling");
    if (resolved) *resolved = "direct";
    return lattice_search(m, theta);
  }
  if (method == McMethod::direct) throw InvalidArgument("mc: no direct sampler wired for " + m.name);
  if (resolved) *resolved = "inverse-cdf";
  if (m.quantile) {
    const double t = theta[0];
    return [q = m.quantile, t](double u) { return q(u, ParamView(&t, 1)); };
  }
  return cdf_inversion(m, theta);
}

std::vector<McEstimate> mc_moments(const ModelSpec& m, const std::vector<std::function<double(Point)>>& fns,
                                   ParamView theta, const McSettings& s) {
  s.validate();
  std::string method;
  const Sampler draw = make_sampler(m, theta, s.method, &method);
  const long chunks = (s.sample_count + kMcChunk - 1) / kMcChunk;
  std::vector<Moments> total(fns.size());
  for (long c = 0; c < chunks; ++c) {
    std::mt19937_64 rng(splitmix64(s.seed ^ splitmix64(static_cast<std::uint64_t>(c))));
    const long count = std::min(kMcChunk, s.sample_count - c * kMcChunk);
    std::vector<Moments> part(fns.size());
    for (long i = 0; i < count; ++i) {
      const double x = draw(open_uniform(rng()));
      const Point p(&x, 1);
      for (std::size_t k = 0; k < fns.size(); ++k) part[k].add(fns[k](p));
    }
    for (std::size_t k = 0; k < fns.size(); ++k) total[k].merge(part[k]);
  }
  std::vector<McEstimate> out;
  for (const auto& t : total) {
    McEstimate e;
    e.mean = t.mean;
    e.std_error = t.n > 1 ? std::sqrt(t.m2 / static_cast<double>(t.n - 1) / static_cast<double>(t.n)) : 0.0;
    e.samples = t.n;
    e.seed = s.seed;
    e.method = method;
    out.push_back(e);
  }
  return out;
}

McEstimate mc_expectation(const ModelSpec& m, const std::function<double(Point)>& fn, ParamView theta,
                          const McSettings& s) {
  return mc_moments(m, {fn}, theta, s).front();
}

std::vector<AttainmentClaim> attainment_claims(const CatalogEntry& entry) {
  std::vector<AttainmentClaim> c = {{"naudts", 1, false, true}};
  if (entry.name == "uniform-max") c.push_back({"hcr", 1, true, false});
  if (entry.name == "gamma-scale") {
    const double k = entry.hyper.at("k");
    for (int order = 1; order <= 3; ++order) c.push_back({"bhatt", order, true, k > 0 && order >= k});
  }
  if (entry.name == "normal-x4") {
    c.push_back({"bhatt", 2, true, true});
    c.push_back({"cr", 1, true, false});
  }
  if (entry.name == "poisson-pair") c.push_back({"bhatt", 2, true, true});
  return c;
}

AttainmentSuite attainment_suite(const CatalogEntry& entry, const std::vector<double>& theta_grid,
                                 const BoundOptions& opts) {
  AttainmentSuite suite;
  suite.entry = entry.name;
  BoundOptions o = opts;
  if (entry.escort.f.support.kind == SupportKind::discrete && o.quad.lattice_truncation == 0) {
    o.quad.lattice_truncation = 60;
  }
  const EscortPair self = EscortPair::self(entry.escort.f);
  const Statistic plain = under_f(entry.statistic);
  for (const auto& claim : attainment_claims(entry)) {
    for (double theta : theta_grid) {
      AttainmentCheck check;
      check.claim = claim;
      const ParamVector th{theta};
      try {
        if (claim.method == "naudts") {
          check.report = naudts_bound(entry.escort, entry.statistic, th, o);
        } else if (claim.method == "bhatt") {
          check.report = bhattacharyya_regular(self, plain, theta, claim.order, o);
        } else if (claim.method == "cr") {
          check.report = classical_cr(entry.escort.f, plain, th, o);
        } else if (claim.method == "hcr") {
          check.report = hcr_bound(entry.escort.f, plain, theta, {}, o);
        }
        check.passed = check.report.attained.has_value() && *check.report.attained == claim.attained;
      } catch (const Error& e) {
        check.error = e.what();
      }
      suite.passed = suite.passed && check.passed;
      suite.checks.push_back(std::move(check));
    }
  }
  return suite;
}

ReductionSuite reduction_suite() {
  ReductionSuite suite;
  const auto run = [&](std::string name, double tolerance, const std::function<double()>& fn) {
    ReductionCheck c;
    c.name = std::move(name);
    c.tolerance = tolerance;
    try {
      c.achieved = fn();
      c.passed = c.achieved <= tolerance;
    } catch (const Error& e) {
      c.error = e.what();
    }
    suite.passed = suite.passed && c.passed;
    suite.checks.push_back(std::move(c));
  };
  const ParamVector one{1.0};
  const ParamVector two{2.0};

  run("cr-equals-naudts-self (poisson)", 1e-10, [&] {
    const auto poi = families::poisson();
    Statistic t;
    t.name = "x";
    t.eval = [](Point x) { return x[0]; };
    return std::fabs(classical_cr(poi, t, one).bound - naudts_bound(EscortPair::self(poi), t, one).bound);
  });
  run("regular-order-1-equals-naudts (uniform-max)", 1e-12, [&] {
    const auto e = catalog_lookup("uniform-max", {{"n", 5}});
    const double n = naudts_bound(e.escort, e.statistic, two).bound;
    return std::fabs(bhattacharyya_regular(e.escort, e.statistic, 2.0, 1).bound - n) / n;
  });
  run("multiparam-p1-equals-naudts (uniform-max)", 1e-12, [&] {
    const auto e = catalog_lookup("uniform-max", {{"n", 5}});
    const double n = naudts_bound(e.escort, e.statistic, two).bound;
    return std::fabs(multiparam_bound(e.escort, e.statistic, two, 1).bound - n) / n;
  });
  run("hcr-equals-single-node-dd (uniform-max n=1)", 1e-12, [&] {
    const auto e = catalog_lookup("uniform-max", {{"n", 1}});
    const auto t = under_f(e.statistic);
    const auto h = hcr_bound(e.escort.f, t, 1.0);
    const auto d = bhattacharyya_dd(EscortPair::self(e.escort.f), t, NodeSet({1.0, h.diagnostics.argmax_nodes.at(0)}));
    return std::fabs(h.bound - d.bound) / d.bound;
  });
  run("clustered-nodes-limit (normal-x4, h=1e-2)", 1e-3, [&] {
    const auto e = catalog_lookup("normal-x4");
    const double reg = bhattacharyya_regular(e.escort, e.statistic, 1.0, 2).bound;
    return std::fabs(bhattacharyya_dd(e.escort, e.statistic, NodeSet({1.0, 1.01, 1.02})).bound - reg) / reg;
  });
  run("nesting-orders-1-4 (gamma-scale g=f)", 1e-10, [&] {
    const auto e = catalog_lookup("gamma-scale", {{"alpha", 3}, {"k", -1}});
    const auto self = EscortPair::self(e.escort.f);
    const auto t = under_f(e.statistic);
    double prev = 0.0;
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
      const double b = bhattacharyya_regular(self, t, 1.0, k).bound;
      worst = std::max(worst, prev - b);
      prev = b;
    }
    return worst;
  });
  run("schur-1x1-equals-naudts (uniform-max)", 1e-12, [&] {
    const auto e = catalog_lookup("uniform-max", {{"n", 5}});
    const auto scores = derivative_scores(e.escort, two, multi_indices(1, 1));
    const double j = vector_schur_bound(e.escort, {e.statistic}, scores, two).j(0, 0);
    const double n = naudts_bound(e.escort, e.statistic, two).bound;
    return std::fabs(j - n) / n;
  });
  return suite;
}

std::vector<McCheck> mc_suite(const McSettings& s) {
  std::vector<McCheck> out;
  const ParamVector one{1.0};
  for (const auto& d : default_entries()) {
    const auto e = catalog_lookup(d.name, d.hyper);
    const auto t = [&e](Point x) { return e.statistic(x); };
    const auto t2 = [&e](Point x) { return std::pow(e.statistic(x), 2); };
    const auto t4 = [&e](Point x) { return std::pow(e.statistic(x), 4); };
    QuadratureSettings q;
    q.lattice_truncation = e.escort.f.support.kind == SupportKind::discrete ? 200 : 0;
    const auto finite_variance = [&](const ModelSpec& m, const std::function<double(Point)>& sq) {
      try {
        return std::isfinite(expectation(m, sq, one, q));
      } catch (const Error&) {
        return false;
      }
    };
    std::vector<std::function<double(Point)>> f_fns;
    std::vector<std::string> f_names;
    if (finite_variance(e.escort.f, t2)) {
      f_fns.push_back(t);
      f_names.push_back("E_f[T]");
    }
    if (finite_variance(e.escort.f, t4)) {
      f_fns.push_back(t2);
      f_names.push_back("E_f[T^2]");
    }
    if (!f_fns.empty()) {
      const auto est = mc_moments(e.escort.f, f_fns, one, s);
      for (std::size_t k = 0; k < f_fns.size(); ++k) {
        McCheck c{e.name, f_names[k], expectation(e.escort.f, f_fns[k], one, q), est[k], false};
        c.passed = c.mc.agrees(c.quadrature);
        out.push_back(std::move(c));
      }
    }
    if (finite_variance(e.escort.g, t2)) {
      McCheck c{e.name, "E_g[T]", expectation(e.escort.g, t, one, q), mc_expectation(e.escort.g, t, one, s), false};
      c.passed = c.mc.agrees(c.quadrature);
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace infoineq
