#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zk/eigenbasis.hpp"
#include "zk/error.hpp"
#include "zk/weights.hpp"

using namespace zk;

TEST_CASE("closed-form values") {
  const Weight arc = make_weight(WeightKind::Arctan);
  CHECK(arc.jet(0.0).value == doctest::Approx(1.0));
  CHECK(arc.jet(0.0).d1 == doctest::Approx(2.0 / std::numbers::pi));

  const Weight e = make_weight(WeightKind::Exponential, 0.5);
  CHECK(e.jet(1.0).value == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(e.jet(1.0).d1 == doctest::Approx(std::exp(1.0)).epsilon(1e-15));

  const Weight p = make_weight(WeightKind::Power, 1.0);
  CHECK(p.jet(3.0).value == doctest::Approx(16.0));
  CHECK(p.jet(3.0).d1 == doctest::Approx(8.0));

  const Weight one = make_weight(WeightKind::Unit);
  CHECK(one.jet(7.0).value == 1.0);
  CHECK(one.jet(7.0).d1 == 0.0);
}

TEST_CASE("derivatives against finite differences") {
  const double h = 1e-4;
  for (const Weight& w : {make_weight(WeightKind::Exponential, 0.3), make_weight(WeightKind::Power, 0.7),
                          make_weight(WeightKind::Arctan), make_weight(WeightKind::Arctan).pow(-0.5),
                          make_weight(WeightKind::Power, 1.5).pow(2.0)}) {
    for (double x : {0.3, 1.0, 4.0}) {
      const WeightJet j = w.jet(x);
      const WeightJet jp = w.jet(x + h);
      const WeightJet jm = w.jet(x - h);
      CHECK((jp.value - jm.value) / (2 * h) == doctest::Approx(j.d1).epsilon(1e-6));
      CHECK((jp.d1 - jm.d1) / (2 * h) == doctest::Approx(j.d2).epsilon(1e-6).scale(1.0));
      CHECK((jp.d2 - jm.d2) / (2 * h) == doctest::Approx(j.d3).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("exponential weight satisfies rho' = 2 alpha rho") {
  const Weight e = make_weight(WeightKind::Exponential, 0.37);
  for (double x : {0.0, 0.5, 3.0, 20.0}) CHECK(e.jet(x).d1 == doctest::Approx(0.74 * e(x)).epsilon(1e-15));
}

TEST_CASE("admissibility certificates") {
  const auto ce = check_admissible(make_weight(WeightKind::Exponential, 0.25), 50.0);
  CHECK(ce.pass);
  CHECK(ce.constants[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ce.constants[1] == doctest::Approx(0.25).epsilon(1e-14));

  const auto cp = check_admissible(make_weight(WeightKind::Power, 1.0), 50.0);
  CHECK(cp.pass);
  CHECK(cp.constants[0] == doctest::Approx(2.0).epsilon(1e-14));

  const auto cu = check_admissible(make_weight(WeightKind::Unit), 50.0);
  CHECK(cu.pass);
  CHECK(cu.constants[0] == 0.0);

  const auto ca = check_admissible(make_weight(WeightKind::Arctan), 50.0, 2);
  CHECK(ca.orders == 2);
  CHECK(ca.constants[0] == doctest::Approx(2.0 / std::numbers::pi));
}

TEST_CASE("powers of admissible weights stay admissible") {
  for (const Weight& w : {make_weight(WeightKind::Exponential, 0.4), make_weight(WeightKind::Power, 0.8),
                          make_weight(WeightKind::Arctan), make_weight(WeightKind::Unit)}) {
    CHECK(check_admissible(w.pow(0.5), 100.0).pass);
    CHECK(check_admissible(w.pow(2.0), 100.0).pass);
  }
}

TEST_CASE("uniqueness hypotheses are reported") {
  const auto c = check_uniqueness_hypotheses(make_weight(WeightKind::Exponential, 1.0), 10.0);
  CHECK(c.derivative_at_least_one);
  CHECK(c.min_derivative == doctest::Approx(2.0));
  const auto a = check_uniqueness_hypotheses(make_weight(WeightKind::Arctan), 10.0);
  CHECK_FALSE(a.derivative_at_least_one);
}

TEST_CASE("weighted L2 norm") {
  const auto basis = build_basis(BoundaryCase::DirichletDirichlet, std::numbers::pi, 3);
  const XGrid grid(4001, 40.0);
  Field f(3, grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f(0, i) = std::exp(-grid.x(i));
  CHECK(weighted_l2(f, grid, make_weight(WeightKind::Unit)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(weighted_l2(f, grid, make_weight(WeightKind::Exponential, 0.5)) == doctest::Approx(1.0).epsilon(1e-9));
  Field z(3, grid.size());
  CHECK(weighted_l2(z, grid, make_weight(WeightKind::Unit)) == 0.0);
  Field g = -3.0 * f;
  CHECK(weighted_l2(g, grid, make_weight(WeightKind::Arctan)) ==
        doctest::Approx(3.0 * weighted_l2(f, grid, make_weight(WeightKind::Arctan))).epsilon(1e-15));
  CHECK_THROWS_AS(weighted_l2(Field(3, 10), grid, make_weight(WeightKind::Unit)), ShapeError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_weight(WeightKind::Exponential, 0.0), ConfigError);
  CHECK_THROWS_AS(make_weight(WeightKind::Power, -1.0), ConfigError);
  CHECK_NOTHROW(make_weight(WeightKind::Arctan, 0.0));
  CHECK_THROWS_AS(check_admissible(make_weight(WeightKind::Unit), 0.0), ConfigError);
  CHECK(parse_weight_kind("power") == WeightKind::Power);
  CHECK_THROWS_AS(parse_weight_kind("gauss"), ConfigError);
}
