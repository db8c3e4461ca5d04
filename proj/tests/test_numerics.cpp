#include <cmath>
#include <random>

#include "doctest.h"
#include "infoineq/differences.hpp"
#include "infoineq/errors.hpp"
#include "infoineq/jet.hpp"
#include "infoineq/quadrature.hpp"

using namespace infoineq;

namespace {

const double kOne[] = {1.0};

}  // namespace

TEST_CASE("integrate polynomial on the unit interval") {
  const auto r = integrate_interval([](double x) { return 2.0 * x; }, {0.0, 1.0}, {}, {});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unbiasedness integral of the power density") {
  const Support s = Support::continuous_1d([](ParamView t) { return Interval{0.0, t[0]}; });
  const auto r = integrate([](Point x) { return 1.5 * x[0] * 2.0 * x[0]; }, s, kOne, {});
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("infinite ranges use the rational map") {
  const auto gauss = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  CHECK(integrate_interval(gauss, {-kInf, kInf}, {}, {}).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate_interval([](double x) { return std::exp(-x); }, {0.0, kInf}, {}, {}).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate_interval([](double x) { return std::exp(x); }, {-kInf, 0.0}, {}, {}).value ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("breakpoints keep kinks on panel edges") {
  const double br[] = {0.3};
  const auto r = integrate_interval([](double x) { return std::fabs(x - 0.3); }, {0.0, 1.0}, br, {});
  CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-14));
}

TEST_CASE("quadrature failures are reported") {
  QuadratureSettings s;
  s.max_subdivisions = 3;
  CHECK_THROWS_AS(integrate_interval([](double x) { return std::sin(1.0 / x); }, {1e-6, 1.0}, {}, s), QuadratureError);
  CHECK_THROWS_AS(integrate_interval([](double) { return std::nan(""); }, {0.0, 1.0}, {}, {}), QuadratureError);
  QuadratureSettings bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("lattice sums: tail rule and explicit truncation") {
  const Support s = Support::lattice();
  auto pmf = [](Point x) { return std::exp(x[0] * std::log(2.0) - 2.0 - std::lgamma(x[0] + 1.0)); };
  const auto tail = integrate(pmf, s, kOne, {});
  CHECK(tail.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tail.truncation > 10);
  QuadratureSettings fixed;
  fixed.lattice_truncation = 60;
  const auto r = integrate(pmf, s, kOne, fixed);
  CHECK(r.truncation == 60);
  CHECK(std::fabs(r.value - 1.0) < 1e-14);
}

TEST_CASE("fixed composite scheme") {
  QuadratureSettings s;
  s.scheme = QuadratureScheme::fixed_composite;
  CHECK(integrate_interval([](double x) { return std::cos(x); }, {0.0, 1.0}, {}, s).value ==
        doctest::Approx(std::sin(1.0)).epsilon(1e-13));
}

TEST_CASE("derivative examples") {
  CHECK(derivative([](double t) { return 2.0 * std::pow(t, 4); }, 1.0, 1).value == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(std::fabs(derivative([](double) { return 3.0; }, 0.7, 1).value) < 1e-12);
  CHECK(derivative([](double t) { return t * t; }, 3.0, 2).value == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(derivative([](double t) { return std::exp(t); }, 0.0, 3).value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(derivative([](double t) { return std::sin(t); }, 0.5, 4).value ==
        doctest::Approx(std::sin(0.5)).epsilon(1e-4));
}

TEST_CASE("derivative errors") {
  CHECK_THROWS_AS(derivative([](double t) { return t; }, 1e-5, 1, 0.0, {0.0, kInf}), DomainError);
  CHECK_THROWS_AS(derivative([](double t) { return t; }, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(derivative([](double t) { return t; }, 1.0, 1, 1e-300), InvalidArgument);
}

TEST_CASE("mixed partials") {
  const double th[] = {1.0, 2.0};
  auto h = [](ParamView t) { return t[0] * t[0] * t[1] * t[1] * t[1]; };
  CHECK(mixed_partial(h, th, {1, 1}).value == doctest::Approx(2.0 * 3.0 * 4.0).epsilon(1e-6));
  CHECK(mixed_partial(h, th, {2, 0}).value == doctest::Approx(16.0).epsilon(1e-6));
}

TEST_CASE("divided difference examples") {
  const NodeSet nodes({0.0, 1.0, 2.0});
  const auto c = divided_difference([](double) { return 4.0; }, nodes);
  CHECK(c.rows[1][0] == 0.0);
  CHECK(c.rows[1][1] == 0.0);
  CHECK(c.rows[2][0] == 0.0);

  const auto q = divided_difference([](double t) { return t * t; }, NodeSet({1.0, 2.0, 4.0}));
  CHECK(q.at(1, 0) == doctest::Approx(3.0));
  CHECK(q.at(1, 1) == doctest::Approx(6.0));
  CHECK(q.at(2, 0) == doctest::Approx(1.0));
  CHECK(q.rows[1].size() == 2);
  CHECK(q.rows[2].size() == 1);

  const auto l = divided_difference([](double t) { return 2.0 * t / 3.0; }, NodeSet({1.0, 1.5}));
  CHECK(l.leading(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(NodeSet({1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(NodeSet({1.0}), InvalidArgument);
}

TEST_CASE("recursion matches the Lagrange form and polynomial leading coefficients") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = trial % 6;
    std::vector<double> coeffs(degree + 1);
    for (double& c : coeffs) c = u(rng);
    auto poly = [&](double t) {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    };
    std::vector<double> pts;
    while (pts.size() < static_cast<std::size_t>(degree + 2)) {
      const double v = 2.0 * u(rng);
      bool far = true;
      for (double p : pts) far = far && std::fabs(p - v) > 0.05;
      if (far) pts.push_back(v);
    }
    const NodeSet nodes(pts);
    const auto table = divided_difference(poly, nodes);
    std::vector<double> values;
    for (double p : pts) values.push_back(poly(p));
    for (int i = 0; i <= nodes.k(); ++i) {
      CHECK(std::fabs(table.leading(i) - lagrange_divided_difference(nodes, values, i)) < 1e-10);
    }
    CHECK(std::fabs(table.leading(degree) - coeffs[degree]) < 1e-10);
    CHECK(std::fabs(table.leading(degree + 1)) < 1e-10);
  }
}

TEST_CASE("multiparameter divided differences") {
  const std::vector<ParamVector> n01 = {{0.0, 5.0}, {1.0, 5.0}};
  CHECK(multiparam_divided_difference([](ParamView t) { return t[0]; }, n01, 0).leading(1) == doctest::Approx(1.0));
  CHECK(multiparam_divided_difference([](ParamView t) { return t[1]; }, n01, 0).leading(1) == 0.0);
  const std::vector<ParamVector> n13 = {{1.0, 2.0}, {3.0, 2.0}};
  CHECK(multiparam_divided_difference([](ParamView t) { return t[0] * t[1]; }, n13, 0).leading(1) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(multiparam_divided_difference([](ParamView t) { return t[0]; }, {{1.0, 0.0}, {1.0, 2.0}}, 0),
                  InvalidArgument);
}

TEST_CASE("derivative and clustered divided differences agree") {
  auto lam = [](double t) { return 2.0 * std::pow(t, 4); };
  const double h = 1e-3;
  const double dd = divided_difference(lam, NodeSet({1.0, 1.0 + h})).leading(1);
  CHECK(std::fabs(dd - derivative(lam, 1.0, 1).value) < 0.05);
  auto lin = [](double t) { return 1.2 * t / 1.4; };
  CHECK(std::fabs(divided_difference(lin, NodeSet({2.0, 2.0 + h})).leading(1) - derivative(lin, 2.0, 1).value) < 1e-4);
}

TEST_CASE("jets carry exact derivatives") {
  const Jet t = Jet::variable(2.0, 4);
  const Jet v = exp(-1.0 * t) * pow(t, 3.0) / t + log(t);
  // d/dt [t^2 e^-t + log t] at 2: (2t - t^2) e^-t + 1/t = 0.5
  CHECK(v.derivative(1) == doctest::Approx(0.5).epsilon(1e-14));
  const Jet s = sqrt(t);
  CHECK(s.derivative(2) == doctest::Approx(-0.25 * std::pow(2.0, -1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(log(Jet::variable(-1.0, 2)), DomainError);
}
