// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infoineq/bounds.hpp"
#include "infoineq/escort.hpp"
#include "infoineq/report_io.hpp"
#include "infoineq/verify.hpp"

using namespace infoineq;

namespace {

// Frozen from tests/oracles/golden.py.
namespace golden {
constexpr double kGammaVariance = 1.0;
constexpr double kGammaBhattGap[] = {2.0 / 3.0, 0.5, 0.4};
// 1/3 - grid sup (= 1/12), rounded down to 1e-6.
constexpr double kHcrMargin = 0.083333;
constexpr double kUniformPowerVariance = 4.0 / 21.0;
constexpr double kJointMaxVariance = 2.0 / 75.0;
constexpr double kPoissonPairVariance = 2.5;
}  // namespace golden

class Criterion {
 public:
  explicit Criterion(int id) : id_(id) {}

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }

  template <class F>
  void guard(F&& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
  }

  bool report(const std::string& title) const {
    std::printf("%s criterion %d: %s%s%s\n", passed_ ? "PASS" : "FAIL", id_, title.c_str(),
                passed_ ? "" : " -- ", failures_.c_str());
    return passed_;
  }

 private:
  int id_;
  bool passed_ = true;
  std::string failures_;
};

std::string num(double v) { return format_number(v); }

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

Statistic under_f(Statistic s) {
  s.lambda_under_g = {};
  return s;
}

Statistic stat(std::string name, std::function<double(double)> fn) {
  Statistic s;
  s.name = std::move(name);
  s.eval = [fn = std::move(fn)](Point x) { return fn(x[0]); };
  return s;
}

double rel_gap(const BoundReport& r) { return *r.gap / *r.variance; }

double sup_error(const std::function<double(double)>& a, const std::function<double(double)>& b, double lo, double hi,
                 int points = 4001) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    worst = std::max(worst, std::fabs(a(x) - b(x)));
  }
  return worst;
}

bool attained(const BoundReport& r) { return r.attained.value_or(false); }

bool criterion1() {
  Criterion c(1);
  c.guard([](Criterion& c) {
    const auto e = catalog_lookup("uniform-max", {{"n", 5}});
    const double two[] = {2.0};
    const auto r = naudts_bound(e.escort, e.statistic, two);
    c.check(rel(r.bound, 4.0 / 35.0) <= 1e-6, "bound(2) = " + num(r.bound));
    c.check(rel(variance_of(e.statistic, e.escort.f, two).value, 4.0 / 35.0) <= 1e-6, "variance(2)");
    c.check(rel_gap(r) <= 1e-6 && attained(r), "gap(2) = " + num(*r.gap));
    for (double t : {0.5, 1.0, 5.0}) {
      const double th[] = {t};
      const auto q = naudts_bound(e.escort, e.statistic, th);
      c.check(rel(q.bound, t * t / 35.0) <= 1e-6, "bound(" + num(t) + ") = " + num(q.bound));
      c.check(rel_gap(q) <= 1e-6 && attained(q), "gap(" + num(t) + ")");
    }
  });
  return c.report("uniform maximum attains the Naudts bound theta^2/35");
}

bool criterion2() {
  Criterion c(2);
  c.guard([](Criterion& c) {
    for (int n : {1, 3}) {
      const auto e = catalog_lookup("expmin", {{"n", static_cast<double>(n)}});
      for (double t : {0.5, 1.0}) {
        const double th[] = {t};
        const auto r = naudts_bound(e.escort, e.statistic, th);
        const double want = 1.0 / (n * n);
        const std::string at = "n=" + std::to_string(n) + " theta=" + num(t);
        c.check(rel(r.bound, want) <= 1e-6, at + " bound " + num(r.bound));
        c.check(rel(*r.variance, want) <= 1e-6, at + " variance " + num(*r.variance));
        c.check(std::fabs(*r.gap) <= 1e-6 && attained(r), at + " gap " + num(*r.gap));
      }
    }
  });
  return c.report("shifted exponential minimum: bound = variance = 1/n^2");
}

bool criterion3() {
  Criterion c(3);
  c.guard([](Criterion& c) {
    const auto e = catalog_lookup("normal-x4");
    const auto self = EscortPair::self(e.escort.f);
    const auto t = under_f(e.statistic);
    for (double v : {1.0, 2.0}) {
      const double th[] = {v};
      const std::string at = "theta=" + num(v);
      const double want = 32.0 * std::pow(v, 8) / 3.0;
      c.check(rel(generalized_fisher(e.escort, th)(0, 0), 6.0 / (v * v)) <= 1e-6, at + " fisher");
      const auto n = naudts_bound(e.escort, e.statistic, th);
      c.check(rel(n.bound, want) <= 1e-6 && attained(n), at + " naudts " + num(n.bound));
      const auto b2 = bhattacharyya_regular(self, t, v, 2);
      c.check(rel(b2.bound, want) <= 1e-6, at + " bhatt2 " + num(b2.bound));
      const auto b1 = bhattacharyya_regular(self, t, v, 1);
      c.check(b1.bound <= 0.9 * want, at + " bhatt1 " + num(b1.bound));
    }
  });
  return c.report("normal x^4: generalized Fisher 6/theta^2, Naudts and order-2 Bhattacharyya 32 theta^8/3");
}

bool criterion4() {
  Criterion c(4);
  c.guard([](Criterion& c) {
    const auto e = catalog_lookup("gamma-scale", {{"alpha", 3}, {"k", -1}});
    const double one[] = {1.0};
    BoundOptions numeric;
    numeric.numeric_lambda = true;
    numeric.numeric_density_derivatives = true;
    const auto n = naudts_bound(e.escort, under_f(e.statistic), one, numeric);
    c.check(n.diagnostics.lambda_path == "quadrature" && n.diagnostics.derivative_path == "numeric", "numeric path");
    c.check(rel_gap(n) <= 1e-4 && attained(n), "naudts gap " + num(rel_gap(n)));
    c.check(rel(*n.variance, golden::kGammaVariance) <= 1e-6, "variance " + num(*n.variance));
    const auto self = EscortPair::self(e.escort.f);
    for (int k = 1; k <= 3; ++k) {
      const auto r = bhattacharyya_regular(self, under_f(e.statistic), 1.0, k);
      const double g = rel_gap(r);
      c.check(g >= 1e-3 && !attained(r), "order " + std::to_string(k) + " gap " + num(g));
      c.check(std::fabs(g - golden::kGammaBhattGap[k - 1]) <= 1e-6, "order " + std::to_string(k) + " golden gap");
    }
  });
  return c.report("gamma scale k=-1: Naudts attained numerically, Bhattacharyya orders 1-3 not attained");
}

bool criterion5() {
  Criterion c(5);
  c.guard([](Criterion& c) {
    const auto e = catalog_lookup("poisson-pair", {{"n", 2}});
    BoundOptions t60;
    t60.quad.lattice_truncation = 60;
    const double one[] = {1.0};
    const auto b = bhattacharyya_regular(EscortPair::self(e.escort.f), under_f(e.statistic), 1.0, 2, t60);
    c.check(std::fabs(*b.variance - golden::kPoissonPairVariance) <= 1e-10, "variance " + num(*b.variance));
    c.check(std::fabs(golden::kPoissonPairVariance - b.bound) <= 1e-8 && attained(b), "bhatt2 " + num(b.bound));
    const auto n = naudts_bound(e.escort, e.statistic, one, t60);
    c.check(rel_gap(n) <= 1e-6 && attained(n), "naudts gap " + num(rel_gap(n)));

    const auto p = catalog_lookup("uniform-max-power", {{"n", 3}, {"k", 2}});
    const auto q = naudts_bound(p.escort, p.statistic, one);
    c.check(rel(*q.variance, golden::kUniformPowerVariance) <= 1e-8, "power variance " + num(*q.variance));
    c.check(rel_gap(q) <= 1e-6 && attained(q), "power gap " + num(rel_gap(q)));
  });
  return c.report("Poisson pair: order-2 Bhattacharyya and mixture-escort Naudts bound attained");
}

bool criterion6() {
  Criterion c(6);
  c.guard([](Criterion& c) {
    const auto e = catalog_lookup("uniform-joint-max", {{"n", 4}});
    const double one[] = {1.0};
    const auto v = variance_of(e.statistic, e.escort.f, one);
    c.check(std::fabs(v.value - golden::kJointMaxVariance) <= 1e-8, "variance " + num(v.value));
    const auto n = naudts_bound(e.escort, e.statistic, one);
    c.check(rel_gap(n) <= 1e-6 && attained(n), "naudts gap " + num(rel_gap(n)));

    const auto d = deformed::uniform_max(4);
    const double theta = deformed::uniform_max_canonical(4, 1.0);
    const auto f = f_escort(d, theta);
    const double err = sup_error(f, [](double t) { return t <= 1.0 ? 4 * t * t * t : 0.0; }, 0.0, 1.5);
    c.check(err <= 1e-6, "f_escort sup error " + num(err));
    const double th[] = {theta};
    const auto r = naudts_bound(deformed_pair(d), d.T, th);
    c.check(std::fabs(*r.variance - golden::kJointMaxVariance) <= 1e-8, "deformed variance " + num(*r.variance));
    c.check(rel_gap(r) <= 1e-6 && attained(r), "deformed gap " + num(rel_gap(r)));
  });
  return c.report("joint uniform maximum: variance 2/75, Naudts attained, F-escort reconstructs f");
}

bool criterion7() {
  Criterion c(7);
  c.guard([](Criterion& c) {
    const auto e = catalog_lookup("uniform-max", {{"n", 1}});
    const auto r = bhattacharyya_dd_sup(EscortPair::self(e.escort.f), under_f(e.statistic), 1.0, 1);
    c.check(1.0 / 3.0 - r.bound >= golden::kHcrMargin, "bound " + num(r.bound));
    c.check(r.attained.has_value() && !*r.attained, "attained flag");
  });
  return c.report("HCR bound for the uniform maximum stays below 1/3");
}

bool criterion8() {
  Criterion c(8);
  c.guard([](Criterion& c) {
    const auto poi = families::poisson();
    const auto x = stat("x", [](double v) { return v; });
    const double one[] = {1.0};
    const auto cr = classical_cr(poi, x, one);
    const auto nd = naudts_bound(EscortPair::self(poi), x, one);
    c.check(std::fabs(cr.bound - nd.bound) <= 1e-10, "poisson cr vs naudts");
    for (const char* name : {"uniform-max", "expmin", "normal-x4"}) {
      const auto e = catalog_lookup(name, name == std::string("normal-x4") ? Hyper{} : Hyper{{"n", 3}});
      const auto a = bhattacharyya_regular(e.escort, e.statistic, 1.0, 1);
      const auto b = naudts_bound(e.escort, e.statistic, one);
      c.check(std::fabs(a.bound - b.bound) <= 1e-12 * b.bound, std::string(name) + " order 1 vs naudts");
    }
    const auto nx = catalog_lookup("normal-x4");
    for (int k = 1; k <= 2; ++k) {
      std::vector<double> nodes;
      for (int i = 0; i <= k; ++i) nodes.push_back(1.0 + 1e-2 * i);
      const auto dd = bhattacharyya_dd(nx.escort, nx.statistic, NodeSet(nodes));
      const auto reg = bhattacharyya_regular(nx.escort, nx.statistic, 1.0, k);
      c.check(rel(dd.bound, reg.bound) <= 1e-3, "clustered dd order " + std::to_string(k));
    }
  });
  return c.report("reduction chain: CR, order-1 Bhattacharyya and clustered divided differences");
}

bool criterion9() {
  Criterion c(9);
  c.guard([](Criterion& c) {
    for (const Hyper& h : {Hyper{{"alpha", 3}, {"k", -1}}, Hyper{{"alpha", 4}, {"k", 2}}}) {
      const auto e = catalog_lookup("gamma-scale", h);
      const auto self = EscortPair::self(e.escort.f);
      double prev = -kInf;
      for (int k = 1; k <= 4; ++k) {
        const double b = bhattacharyya_regular(self, under_f(e.statistic), 1.0, k).bound;
        c.check(b >= prev - 1e-10, "order " + std::to_string(k) + " dropped to " + num(b));
        prev = b;
      }
    }
  });
  return c.report("Bhattacharyya bounds are nondecreasing in the order");
}

bool criterion10() {
  Criterion c(10);
  c.guard([](Criterion& c) {
    const double one[] = {1.0};
    const double two[] = {2.0};
    const std::vector<std::tuple<std::string, Hyper, const double*>> cases = {
        {"uniform-max", {{"n", 5}}, two},
        {"expmin", {{"n", 3}}, one},
        {"uniform-max-power", {{"n", 3}, {"k", 2}}, one},
        {"normal-x4", {}, one},
    };
    for (const auto& [name, hyper, th] : cases) {
      const auto e = catalog_lookup(name, hyper);
      const double corr = verify_equality_condition(e.escort, e.statistic, ParamView(th, 1));
      c.check(std::fabs(corr - 1.0) <= 1e-6, name + " correlation " + num(corr));
    }
    const auto um = catalog_lookup("uniform-max", {{"n", 1}});
    const auto h = hcr_bound(um.escort.f, under_f(um.statistic), 1.0);
    const double corr = h.diagnostics.equality_correlation.value_or(1.0);
    c.check(corr < 1.0 - 1e-3, "hcr correlation " + num(corr));
  });
  return c.report("equality-condition correlation separates attained from non-attained bounds");
}

bool criterion11() {
  Criterion c(11);
  c.guard([](Criterion& c) {
    const BaseDensity ex{"exp", [](double x) { return std::exp(-x); }, {0.0, kInf}, {}};
    const auto g = synth_location(ex, stat("x-1", [](double x) { return x - 1.0; }), 0.0);
    const double el =
        sup_error([&](double x) { return g.g(x); }, [](double x) { return x * std::exp(-x); }, 0.01, 20.0);
    c.check(el <= 1e-6, "location sup error " + num(el));
    const BaseDensity gamma3{"gamma3", [](double x) { return 0.5 * x * x * std::exp(-x); }, {0.0, kInf}, {}};
    const auto s = synth_scale(gamma3, stat("2/x", [](double x) { return 2.0 / x; }), 1.0);
    const double es =
        sup_error([&](double x) { return s.g(x); }, [](double x) { return x * std::exp(-x); }, 0.05, 20.0);
    c.check(es <= 1e-6, "scale sup error " + num(es));
  });
  return c.report("escort synthesis recovers the location and scale escorts");
}

SymMatrix random_gram(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> z;
  Matrix b(n, n + 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n + 3; ++j) b(i, j) = z(rng);
  }
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n + 3; ++k) s += b(i, k) * b(j, k);
      a.set(i, j, s);
    }
  }
  return a;
}

bool criterion12() {
  Criterion c(12);
  c.guard([](Criterion& c) {
    const auto gs = EscortPair::self(families::gaussian_sample(5));
    Statistic xbar;
    xbar.name = "xbar";
    xbar.eval = [](Point x) { return x[0]; };
    Statistic s2;
    s2.name = "s2";
    s2.eval = [](Point x) { return x[1]; };
    const ParamVector theta = {0.3, 1.7};
    const auto scores = derivative_scores(gs, theta, multi_indices(2, 1));
    const auto r = vector_schur_bound(gs, {xbar, s2}, scores, theta);
    c.check(r.certificate.psd, "gaussian certificate");
    c.check(std::fabs(r.complement(0, 0)) <= 1e-8, "xbar component gap " + num(r.complement(0, 0)));

    std::mt19937_64 rng(2024);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const SymMatrix full = random_gram(rng, 5);
      const std::size_t t_idx[] = {0, 1};
      const std::size_t s_idx[] = {2, 3, 4};
      Matrix cross(2, 3);
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) cross(i, j) = full(i, 2 + j);
      }
      const auto sc = schur_complement(full.principal(t_idx), cross, full.principal(s_idx));
      if (!cholesky(sc.complement).ok()) ++bad;
    }
    c.check(bad == 0, std::to_string(bad) + " random complements not PD");
  });
  return c.report("Schur complement bound is PSD on the Gaussian example and random Gram matrices");
}

bool criterion13() {
  Criterion c(13);
  c.guard([](Criterion& c) {
    McSettings s;
    s.sample_count = 1000000;
    const auto a = mc_suite(s);
    const auto b = mc_suite(s);
    c.check(a.size() >= 14, "only " + std::to_string(a.size()) + " checks");
    for (std::size_t i = 0; i < a.size(); ++i) {
      c.check(a[i].passed, a[i].entry + " " + a[i].quantity + " quad " + num(a[i].quadrature) + " mc " +
                               num(a[i].mc.mean) + " +- " + num(a[i].mc.std_error));
      c.check(i < b.size() && a[i].mc.mean == b[i].mc.mean && a[i].mc.std_error == b[i].mc.std_error,
              a[i].entry + " " + a[i].quantity + " rerun differs");
    }
  });
  return c.report("Monte Carlo agrees with quadrature within 4 standard errors, reproducibly");
}

}  // namespace

int main() {
  const std::vector<bool (*)()> criteria = {criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                            criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                            criterion11, criterion12, criterion13};
  int failed = 0;
  for (auto run : criteria) failed += run() ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
