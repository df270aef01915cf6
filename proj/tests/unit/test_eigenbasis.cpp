#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zk/eigenbasis.hpp"
#include "zk/error.hpp"
#include "zk/quadrature.hpp"

using namespace zk;

namespace {
constexpr double pi = std::numbers::pi;
const BoundaryCase kCases[] = {BoundaryCase::DirichletDirichlet, BoundaryCase::NeumannNeumann,
                               BoundaryCase::DirichletNeumann, BoundaryCase::Periodic};
}  // namespace

TEST_CASE("first eigenpairs in closed form") {
  const auto a = build_basis(BoundaryCase::DirichletDirichlet, pi, 4);
  CHECK(a.eigenvalue(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.evaluate(0, 0.7) == doctest::Approx(std::sqrt(2.0 / pi) * std::sin(0.7)).epsilon(1e-14));

  const auto b = build_basis(BoundaryCase::NeumannNeumann, pi, 4);
  CHECK(b.eigenvalue(0) == 0.0);
  CHECK(b.evaluate(0, 1.3) == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-14));
  CHECK(b.eigenvalue(1) == doctest::Approx(1.0).epsilon(1e-15));

  const auto c = build_basis(BoundaryCase::DirichletNeumann, pi, 4);
  CHECK(c.eigenvalue(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.evaluate(0, 2.1) == doctest::Approx(std::sqrt(2.0 / pi) * std::sin(1.05)).epsilon(1e-14));

  const auto d = build_basis(BoundaryCase::Periodic, 2.0, 5);
  CHECK(d.eigenvalue(0) == 0.0);
  CHECK(d.eigenvalue(1) == doctest::Approx(pi * pi).epsilon(1e-15));
  CHECK(d.eigenvalue(2) == d.eigenvalue(1));
  // cosine before sine within a pair
  CHECK(d.evaluate(1, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(d.evaluate(2, 0.0)) < 1e-15);
}

TEST_CASE("orthonormality against an independent Gauss-Legendre oracle") {
  for (BoundaryCase c : kCases) {
    for (double L : {1.0, pi, 5.0}) {
      const auto basis = build_basis(c, L, 24);
      const QuadratureRule gl = gauss_legendre(200, 0.0, L);
      double worst = 0.0;
      for (std::size_t l = 0; l < basis.size(); ++l) {
        for (std::size_t m = 0; m < basis.size(); ++m) {
          double s = 0.0;
          for (std::size_t k = 0; k < gl.nodes.size(); ++k)
            s += gl.weights[k] * basis.evaluate(l, gl.nodes[k]) * basis.evaluate(m, gl.nodes[k]);
          worst = std::max(worst, std::abs(s - (l == m ? 1.0 : 0.0)));
        }
      }
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("discrete orthonormality and eigen-residual up to 128 modes") {
  for (BoundaryCase c : kCases) {
    const auto basis = build_basis(c, 5.0, 128);
    const Eigen::MatrixXd gram = basis.analysis_matrix() * basis.synthesis_matrix();
    CHECK((gram - Eigen::MatrixXd::Identity(128, 128)).cwiseAbs().maxCoeff() < 1e-10);
    double worst = 0.0;
    for (std::size_t l = 0; l < basis.size(); ++l) {
      for (double y : basis.nodes()) {
        worst = std::max(worst, std::abs(-basis.evaluate(l, y, 2) - basis.eigenvalue(l) * basis.evaluate(l, y)));
      }
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("second derivative agrees with a finite-difference oracle") {
  for (BoundaryCase c : kCases) {
    const auto basis = build_basis(c, pi, 6);
    const double h = 1e-3;
    for (std::size_t l = 0; l < basis.size(); ++l) {
      const double y = 1.1;
      const double fd = (basis.evaluate(l, y + h) - 2.0 * basis.evaluate(l, y) + basis.evaluate(l, y - h)) / (h * h);
      CHECK(fd == doctest::Approx(-basis.eigenvalue(l) * basis.evaluate(l, y)).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("endpoint conditions of each family") {
  const double L = 2.5;
  for (std::size_t l = 0; l < 10; ++l) {
    const auto a = build_basis(BoundaryCase::DirichletDirichlet, L, 10);
    CHECK(std::abs(a.evaluate(l, 0.0)) < 1e-14);
    CHECK(std::abs(a.evaluate(l, L)) < 1e-13);
    const auto b = build_basis(BoundaryCase::NeumannNeumann, L, 10);
    CHECK(std::abs(b.evaluate(l, 0.0, 1)) < 1e-13);
    CHECK(std::abs(b.evaluate(l, L, 1)) < 1e-12);
    const auto c = build_basis(BoundaryCase::DirichletNeumann, L, 10);
    CHECK(std::abs(c.evaluate(l, 0.0)) < 1e-14);
    CHECK(std::abs(c.evaluate(l, L, 1)) < 1e-12);
    const auto d = build_basis(BoundaryCase::Periodic, L, 10);
    CHECK(d.evaluate(l, 0.0) == doctest::Approx(d.evaluate(l, L)).scale(1.0).epsilon(1e-13));
    CHECK(d.evaluate(l, 0.0, 1) == doctest::Approx(d.evaluate(l, L, 1)).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues sorted and non-negative") {
  for (BoundaryCase c : kCases) {
    const auto basis = build_basis(c, 1.0, 64);
    for (std::size_t l = 0; l < basis.size(); ++l) {
      CHECK(basis.eigenvalue(l) >= 0.0);
      if (l > 0) CHECK(basis.eigenvalue(l) >= basis.eigenvalue(l - 1));
    }
  }
}

TEST_CASE("analyze and synthesize") {
  for (BoundaryCase c : kCases) {
    const auto basis = build_basis(c, pi, 12);
    std::vector<double> e1(basis.node_count());
    for (std::size_t j = 0; j < e1.size(); ++j) e1[j] = basis.evaluate(1, basis.nodes()[j]);
    const auto c1 = basis.analyze(e1);
    for (std::size_t l = 0; l < c1.size(); ++l) CHECK(std::abs(c1[l] - (l == 1 ? 1.0 : 0.0)) < 1e-12);

    const auto zero = basis.analyze(std::vector<double>(basis.node_count(), 0.0));
    for (double v : zero) CHECK(v == 0.0);

    // 3 psi_1 + 2 psi_3, coefficients checked against direct Gauss-Legendre quadrature.
    auto phi = [&](double y) { return 3.0 * basis.evaluate(0, y) + 2.0 * basis.evaluate(2, y); };
    std::vector<double> s(basis.node_count());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = phi(basis.nodes()[j]);
    const auto cs = basis.analyze(s);
    const QuadratureRule gl = gauss_legendre(80, 0.0, pi);
    for (std::size_t l = 0; l < basis.size(); ++l) {
      double ref = 0.0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) ref += gl.weights[k] * phi(gl.nodes[k]) * basis.evaluate(l, gl.nodes[k]);
      CHECK(cs[l] == doctest::Approx(ref).scale(1.0).epsilon(1e-12));
    }
    CHECK(cs[0] == doctest::Approx(3.0));
    CHECK(cs[2] == doctest::Approx(2.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> coeffs(basis.size());
    for (double& v : coeffs) v = u(rng);
    const auto back = basis.analyze(basis.synthesize(coeffs));
    for (std::size_t l = 0; l < coeffs.size(); ++l) CHECK(std::abs(back[l] - coeffs[l]) < 1e-10);

    const auto unit = basis.synthesize(std::vector<double>{1.0});
    for (std::size_t j = 0; j < unit.size(); ++j) CHECK(unit[j] == doctest::Approx(basis.evaluate(0, basis.nodes()[j])));
  }
}

TEST_CASE("Steklov constants") {
  CHECK(steklov_lambda1(build_basis(BoundaryCase::DirichletDirichlet, pi, 8)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(steklov_lambda1(build_basis(BoundaryCase::DirichletNeumann, pi, 8)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(steklov_lambda1(build_basis(BoundaryCase::NeumannNeumann, 3.0, 8)) == 0.0);

  // <phi, phi> <= (1/lambda_1) <phi', phi'> with equality on the first mode.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (BoundaryCase c : {BoundaryCase::DirichletDirichlet, BoundaryCase::DirichletNeumann}) {
    const auto basis = build_basis(c, 2.0, 16);
    const double lam1 = steklov_lambda1(basis);
    const QuadratureRule gl = gauss_legendre(120, 0.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> coeffs(basis.size());
      for (double& v : coeffs) v = u(rng);
      if (trial == 0) std::fill(coeffs.begin() + 1, coeffs.end(), 0.0);
      double p2 = 0.0;
      double d2 = 0.0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        double v = 0.0;
        double dv = 0.0;
        for (std::size_t l = 0; l < coeffs.size(); ++l) {
          v += coeffs[l] * basis.evaluate(l, gl.nodes[k]);
          dv += coeffs[l] * basis.evaluate(l, gl.nodes[k], 1);
        }
        p2 += gl.weights[k] * v * v;
        d2 += gl.weights[k] * dv * dv;
      }
      CHECK(p2 <= d2 / lam1 * (1.0 + 1e-12));
      if (trial == 0) CHECK(p2 == doctest::Approx(d2 / lam1).epsilon(1e-12));
    }
  }
}

TEST_CASE("padded node counts") {
  const auto basis = build_basis(BoundaryCase::DirichletDirichlet, pi, 8, 13);
  CHECK(basis.size() == 8);
  CHECK(basis.node_count() == 13);
  const Eigen::MatrixXd gram = basis.analysis_matrix() * basis.synthesis_matrix();
  CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(build_basis(BoundaryCase::DirichletDirichlet, 0.0, 4), ConfigError);
  CHECK_THROWS_AS(build_basis(BoundaryCase::DirichletDirichlet, -1.0, 4), ConfigError);
  CHECK_THROWS_AS(build_basis(BoundaryCase::DirichletDirichlet, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(build_basis(BoundaryCase::DirichletDirichlet, 1.0, 8, 3), ConfigError);
  const auto basis = build_basis(BoundaryCase::Periodic, 1.0, 5);
  CHECK_THROWS_AS(basis.analyze(std::vector<double>(3, 0.0)), ShapeError);
  CHECK_THROWS_AS(basis.synthesize(std::vector<double>(9, 0.0)), ShapeError);
  CHECK(parse_boundary_case("c") == BoundaryCase::DirichletNeumann);
  CHECK(parse_boundary_case("Periodic") == BoundaryCase::Periodic);
  CHECK_THROWS_AS(parse_boundary_case("e"), ConfigError);
}
