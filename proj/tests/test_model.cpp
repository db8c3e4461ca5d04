#include <cmath>

#include "doctest.h"
#include "infoineq/errors.hpp"
#include "infoineq/model.hpp"

using namespace infoineq;

namespace {

struct Case {
  const char* name;
  Hyper hyper;
};

const std::vector<Case> kCases = {
    {"uniform-max", {{"n", 5}}},
    {"uniform-max", {{"n", 1}}},
    {"expmin", {{"n", 3}}},
    {"uniform-max-power", {{"n", 3}, {"k", 2}}},
    {"gamma-scale", {{"alpha", 3}, {"k", -1}}},
    {"gamma-scale", {{"alpha", 5}, {"k", -2}}},
    {"gamma-scale", {{"alpha", 2.5}, {"k", 2}}},
    {"normal-x4", {}},
    {"poisson-pair", {{"n", 2}}},
    {"uniform-joint-max", {{"n", 4}}},
};

const double kGrid[] = {0.5, 0.8, 1.0, 2.0, 3.0};

}  // namespace

TEST_CASE("catalog index lists seven entries") {
  const auto& idx = catalog_index();
  REQUIRE(idx.size() == 7);
  CHECK(idx[0].name == "uniform-max");
  CHECK(idx[6].name == "uniform-joint-max");
  CHECK(idx[3].signature == "alpha k");
}

TEST_CASE("catalog lookup examples") {
  const auto um = catalog_lookup("uniform-max", {{"n", 5}});
  CHECK(um.variance(2.0) == doctest::Approx(4.0 / 35.0));
  CHECK(um.lambda(2.0) == doctest::Approx(12.0 / 7.0));
  CHECK(um.fisher(2.0) == doctest::Approx(45.0 / 7.0));
  const auto nx = catalog_lookup("normal-x4");
  CHECK(nx.variance(1.0) == doctest::Approx(32.0 / 3.0));
  CHECK(nx.fisher(2.0) == doctest::Approx(1.5));
  CHECK(nx.lambda(1.0) == doctest::Approx(2.0));
  const auto em = catalog_lookup("expmin", {{"n", 3}});
  CHECK(em.variance(0.5) == doctest::Approx(1.0 / 9.0));
  CHECK(em.variance(7.0) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("catalog lookup errors") {
  CHECK_THROWS_AS(catalog_lookup("nope"), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("uniform-max"), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("uniform-max", {{"n", 0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("uniform-max", {{"n", 2.5}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("uniform-max", {{"n", 2}, {"m", 1}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("gamma-scale", {{"alpha", 1}, {"k", -1}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("gamma-scale", {{"alpha", 3}, {"k", 0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("gamma-scale", {{"alpha", -1}, {"k", 1}}), InvalidArgument);
  CHECK_THROWS_AS(catalog_lookup("normal-x4", {{"n", 1}}), InvalidArgument);
}

TEST_CASE("normalization examples") {
  const double one[] = {1.0};
  const auto um = catalog_lookup("uniform-max", {{"n", 2}});
  CHECK(normalization_check(um.escort.f, one) < 1e-10);
  CHECK(normalization_check(catalog_lookup("normal-x4").escort.g, one) < 1e-8);
  QuadratureSettings t60;
  t60.lattice_truncation = 60;
  CHECK(normalization_check(catalog_lookup("poisson-pair", {{"n", 2}}).escort.g, one, t60) < 1e-8);
}

TEST_CASE("every entry normalizes f and g on the reference grid") {
  for (const auto& c : kCases) {
    const auto e = catalog_lookup(c.name, c.hyper);
    for (double t : kGrid) {
      const double th[] = {t};
      INFO(c.name << " theta=" << t);
      CHECK(normalization_check(e.escort.f, th) <= 1e-8);
      CHECK(normalization_check(e.escort.g, th) <= 1e-8);
    }
  }
}

TEST_CASE("unbiasedness examples") {
  const double two[] = {2.0};
  const double one[] = {1.0};
  CHECK(unbiasedness_check(catalog_lookup("uniform-max", {{"n", 5}}), two) < 1e-10);
  CHECK(unbiasedness_check(catalog_lookup("gamma-scale", {{"alpha", 3}, {"k", -1}}), one) < 1e-8);
  const auto j = catalog_lookup("uniform-joint-max", {{"n", 4}});
  CHECK(j.statistic.target(1.0) == doctest::Approx(0.8));
  CHECK(unbiasedness_check(j, one) < 1e-8);
}

TEST_CASE("stored closed forms agree with quadrature at the reference points") {
  for (const auto& c : kCases) {
    const auto e = catalog_lookup(c.name, c.hyper);
    for (const auto& p : e.reference_points) {
      INFO(c.name << " theta=" << p[0]);
      CHECK(unbiasedness_check(e, p) < 1e-8);
      const auto v = variance_of(e.statistic, e.escort.f, p);
      CHECK(v.value == doctest::Approx(e.variance(p)).epsilon(1e-6));
      CHECK(expectation(e.escort.g, e.statistic.eval, p) == doctest::Approx(e.lambda(p)).epsilon(1e-8));
    }
  }
}

TEST_CASE("closed-form jets differentiate the stored formulas") {
  const auto e = catalog_lookup("normal-x4");
  CHECK(e.lambda.jet(1.0, 1).derivative(1) == doctest::Approx(8.0));
  CHECK(e.variance.jet(1.0, 2).derivative(2) == doctest::Approx(32.0 * 56.0 / 3.0));
  const auto x = catalog_lookup("expmin", {{"n", 2}});
  CHECK(x.variance.jet(1.0, 1).derivative(1) == 0.0);
}

TEST_CASE("example five variance is the moment-oracle value") {
  const auto e = catalog_lookup("uniform-max-power", {{"n", 3}, {"k", 2}});
  const double one[] = {1.0};
  CHECK(e.variance(1.0) == doctest::Approx(4.0 / 21.0).epsilon(1e-14));
  CHECK(variance_of(e.statistic, e.escort.f, one).value == doctest::Approx(4.0 / 21.0).epsilon(1e-10));
  CHECK(e.lambda(1.0) == doctest::Approx(5.0 / 7.0));
}

TEST_CASE("support containment holds for every entry") {
  for (const auto& c : kCases) {
    const auto e = catalog_lookup(c.name, c.hyper);
    for (double t : kGrid) {
      const double th[] = {t};
      CHECK(containment_violations(e.escort, th) == 0);
    }
  }
}

TEST_CASE("densities vanish outside the support and the domain is open") {
  const auto e = catalog_lookup("uniform-max", {{"n", 2}});
  CHECK(e.escort.f.density(1.5, 1.0) == 0.0);
  CHECK(e.escort.f.density(-0.1, 1.0) == 0.0);
  const double zero[] = {0.0};
  CHECK_THROWS_AS(normalization_check(e.escort.f, zero), DomainError);
  const double x[] = {1.5};
  const double th[] = {1.0};
  CHECK(*e.escort.f.analytic_partial(x, th, {1}) == 0.0);
}

TEST_CASE("analytic partials match numeric ones") {
  const auto e = catalog_lookup("gamma-scale", {{"alpha", 3}, {"k", -1}});
  const double x[] = {1.7};
  const double th[] = {1.3};
  const double h = 1e-5;
  const double num = (e.escort.g.density(1.7, 1.3 + h) - e.escort.g.density(1.7, 1.3 - h)) / (2 * h);
  CHECK(*e.escort.g.analytic_partial(x, th, {1}) == doctest::Approx(num).epsilon(1e-8));

  const auto gs = families::gaussian_single();
  const double mv[] = {0.3, 1.7};
  const double px[] = {0.9};
  const double dv =
      (gs.pdf(px, std::vector<double>{0.3, 1.7 + h}) - gs.pdf(px, std::vector<double>{0.3, 1.7 - h})) / (2 * h);
  CHECK(*gs.partial(px, mv, {0, 1}) == doctest::Approx(dv).epsilon(1e-7));

  const auto s = families::gaussian_sample(5);
  const double sx[] = {0.2, 1.1};
  const double sv = (s.pdf(sx, std::vector<double>{0.3, 1.7 + h}) - s.pdf(sx, std::vector<double>{0.3, 1.7 - h})) / (2 * h);
  CHECK(*s.partial(sx, mv, {0, 1}) == doctest::Approx(sv).epsilon(1e-7));
  CHECK(normalization_check(s, mv) < 1e-8);
}

TEST_CASE("escort pairs require matching domains") {
  CHECK_THROWS_AS(EscortPair::make(families::poisson(), families::gaussian_single()), InvalidArgument);
  CHECK(EscortPair::self(families::poisson()).containment_checked);
}
