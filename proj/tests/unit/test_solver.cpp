#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zk/data_sources.hpp"
#include "zk/error.hpp"
#include "zk/quadrature.hpp"
#include "zk/semigroup.hpp"
#include "zk/solver.hpp"

using namespace zk;
constexpr double pi = std::numbers::pi;

namespace {
SolverConfig small_config() {
  SolverConfig c;
  c.boundary_case = BoundaryCase::DirichletDirichlet;
  c.L = pi;
  c.X_max = 12.0;
  c.N_x = 97;
  c.l_max = 4;
  c.T = 0.1;
  c.dt = 1e-3;
  return c;
}

Field gaussian_u0(const SolverConfig& c, double amp, double x0, double w, std::size_t mode = 0) {
  const XGrid grid(c.N_x, c.X_max);
  Field u(c.l_max, c.N_x);
  for (std::size_t i = 0; i < grid.size(); ++i) u(mode, i) = amp * std::exp(-std::pow((grid.x(i) - x0) / w, 2));
  return u;
}

double rel_l2(const Field& a, const Field& b, std::size_t skip_left = 0) {
  double e = 0.0, r = 0.0;
  for (std::size_t l = 0; l < a.modes(); ++l)
    for (std::size_t i = skip_left; i < a.points(); ++i) {
      e += std::pow(a(l, i) - b(l, i), 2);
      r += std::pow(b(l, i), 2);
    }
  return std::sqrt(e / r);
}
}  // namespace

TEST_CASE("zero data stays zero") {
  for (TimeScheme s : {TimeScheme::Imex, TimeScheme::ExplicitRK4}) {
    SolverConfig c = small_config();
    c.scheme = s;
    c.dt = (s == TimeScheme::Imex) ? 1e-3 : 1e-4;
    c.T = 20 * c.dt;
    const ZkSolver solver(c, ProblemData{});
    Field u = solver.initial_state();
    CHECK(solver.rhs(u, 0.0).max_abs() == 0.0);
    const RunResult r = solver.run();
    CHECK(r.final_state.max_abs() == 0.0);
    for (double m : r.series.mass) CHECK(m == 0.0);
  }
}

TEST_CASE("constant state of the Neumann constant mode has zero rhs") {
  SolverConfig c = small_config();
  c.boundary_case = BoundaryCase::NeumannNeumann;
  c.nonlinearity = Nonlinearity::Off;
  ProblemData d;
  d.u0 = Field(c.l_max, c.N_x);
  for (std::size_t i = 0; i < c.N_x; ++i) d.u0(0, i) = 0.7;
  d.boundary = [](double, std::vector<double>& mu) { mu[0] = 0.7; };
  const ZkSolver solver(c, d);
  const Field r = solver.rhs(solver.initial_state(), 0.0);
  for (std::size_t i = 1; i + 4 < c.N_x; ++i) CHECK(std::abs(r(0, i)) < 1e-11);
}

TEST_CASE("linear rhs matches the spectral generator in the interior") {
  SolverConfig c = small_config();
  c.nonlinearity = Nonlinearity::Off;
  c.b = 0.4;
  double prev = 0.0;
  for (std::size_t n : {193ul, 385ul}) {
    c.N_x = n;
    ProblemData d;
    d.u0 = gaussian_u0(c, 1.0, 6.0, 1.0, 1);
    const ZkSolver solver(c, d);
    const Field r = solver.rhs(solver.initial_state(), 0.0);
    const StripGrid g(solver.grid().dx(), 30.0, c.X_max);
    const Field a = restrict_to_half(apply_generator(extend_to_strip(d.u0, g), c.b, solver.basis()), n);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 8; i + 8 < n; ++i) {
      err = std::max(err, std::abs(r(1, i) - a(1, i)));
      ref = std::max(ref, std::abs(a(1, i)));
    }
    CHECK(err < 1e-2 * ref);
    if (prev > 0.0) CHECK(prev / err > 12.0);  // fourth order in dx
    prev = err;
  }
}

TEST_CASE("nonlinear term projects the physical product exactly") {
  for (BoundaryCase bc : {BoundaryCase::DirichletDirichlet, BoundaryCase::NeumannNeumann,
                          BoundaryCase::DirichletNeumann, BoundaryCase::Periodic}) {
    SolverConfig c = small_config();
    c.boundary_case = bc;
    c.l_max = 6;
    ProblemData d;
    d.u0 = gaussian_u0(c, 0.5, 5.0, 1.0, 1);
    for (std::size_t i = 0; i < c.N_x; ++i) {
      d.u0(4, i) = 0.5 * d.u0(1, i);
      d.u0(5, i) = -0.3 * d.u0(1, i);
    }
    const ZkSolver solver(c, d);
    const Field u = solver.initial_state();
    const Field nl = solver.nonlinear(u);
    const QuadratureRule gl = gauss_legendre(120, 0.0, pi);
    Field ux(c.l_max, c.N_x);
    for (std::size_t l = 0; l < c.l_max; ++l) solver.measure().ops().gradient(u.mode(l), ux.mode(l));
    for (std::size_t i : {10ul, 40ul, 60ul}) {
      for (std::size_t l = 0; l < c.l_max; ++l) {
        double ref = 0.0;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
          double v = 0.0, vx = 0.0;
          for (std::size_t m = 0; m < c.l_max; ++m) {
            const double psi = solver.basis().evaluate(m, gl.nodes[k]);
            v += u(m, i) * psi;
            vx += ux(m, i) * psi;
          }
          ref += gl.weights[k] * v * vx * solver.basis().evaluate(l, gl.nodes[k]);
        }
        CHECK(nl(l, i) == doctest::Approx(ref).scale(1.0).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("saturated nonlinearity equals the full one below 1/h") {
  SolverConfig c = small_config();
  ProblemData d;
  d.u0 = gaussian_u0(c, 0.3, 5.0, 1.0, 0);
  SolverConfig cs = c;
  cs.nonlinearity = Nonlinearity::Saturated;
  cs.h = 1.0;
  const ZkSolver full(c, d), sat(cs, d);
  const Field u = full.initial_state();
  CHECK(full.nonlinear(u).data() == sat.nonlinear(u).data());
}

TEST_CASE("explicit RK4 against the exact multiplier at dt = dx^3/8") {
  SolverConfig c;
  c.boundary_case = BoundaryCase::DirichletDirichlet;
  c.L = pi;
  c.X_max = 40.0;
  c.N_x = 401;
  c.l_max = 1;
  c.nonlinearity = Nonlinearity::Off;
  c.scheme = TimeScheme::ExplicitRK4;
  const double dx = c.X_max / (c.N_x - 1);
  c.dt = dx * dx * dx / 8.0;
  c.T = 1.0;
  c.dt = c.T / std::ceil(c.T / c.dt);
  c.series_every = 1000000;
  ProblemData d;
  d.u0 = gaussian_u0(c, 1.0, 24.0, 2.5);
  const ZkSolver solver(c, d);
  const RunResult r = solver.run();
  const StripGrid g(dx, 200.0, c.X_max);
  const Field exact = restrict_to_half(eval_S(extend_to_strip(d.u0, g), c.T, c.b, solver.basis(), 1e-9), c.N_x);
  CHECK(rel_l2(r.final_state, exact) < 1e-4);
}

TEST_CASE("temporal convergence orders") {
  SolverConfig c;
  c.X_max = 12.0;
  c.N_x = 97;
  c.l_max = 2;
  c.b = 0.0;
  c.nonlinearity = Nonlinearity::Full;
  ProblemData d;
  d.u0 = gaussian_u0(c, 0.5, 6.0, 1.2);

  auto run_with = [&](TimeScheme s, double dt, double T) {
    SolverConfig cc = c;
    cc.scheme = s;
    cc.dt = dt;
    cc.T = T;
    cc.series_every = 1000000;
    return ZkSolver(cc, d).run().final_state;
  };
  SUBCASE("rk4") {
    const double dx = c.X_max / (c.N_x - 1);
    const double base = 0.5 * 2.8 / (4.6087 / (dx * dx * dx));
    const double T = 512 * base;
    const Field ref = run_with(TimeScheme::ExplicitRK4, base / 8, T);
    const double e1 = rel_l2(run_with(TimeScheme::ExplicitRK4, base, T), ref);
    const double e2 = rel_l2(run_with(TimeScheme::ExplicitRK4, base / 2, T), ref);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
  }
  SUBCASE("imex") {
    const double T = 0.5;
    const Field ref = run_with(TimeScheme::Imex, T / 800, T);
    const double e1 = rel_l2(run_with(TimeScheme::Imex, T / 50, T), ref);
    const double e2 = rel_l2(run_with(TimeScheme::Imex, T / 100, T), ref);
    CHECK(e1 / e2 > 6.0);
  }
}

TEST_CASE("boundary data is imposed at x = 0") {
  SolverConfig c = small_config();
  ProblemData d;
  d.boundary = make_boundary(BoundarySpec{BoundaryKind::Sine, 0.05, 3.0, 0.05, 1}, c.l_max);
  const ZkSolver solver(c, d);
  Field u = solver.initial_state();
  double t = 0.0;
  for (int n = 0; n < 50; ++n, t += c.dt) solver.step(u, t, c.dt);
  std::vector<double> mu(c.l_max);
  d.boundary(t, mu);
  for (std::size_t l = 0; l < c.l_max; ++l) {
    CHECK(u(l, 0) == mu[l]);
    CHECK(u(l, c.N_x - 1) == 0.0);
  }
  CHECK(u.max_abs() > 0.0);
}

TEST_CASE("mass is non-increasing for small data and zero boundary data") {
  SolverConfig c = small_config();
  c.T = 1.0;
  c.dt = 2e-3;
  // Airy tails reach far to the right; a short domain would fail the leak check.
  c.X_max = 24.0;
  c.N_x = 769;
  ProblemData d;
  d.u0 = gaussian_u0(c, 0.2, 4.0, 1.0);
  const RunResult r = ZkSolver(c, d).run();
  for (std::size_t n = 1; n < r.series.size(); ++n) CHECK(r.series.mass[n] <= r.series.mass[n - 1] * (1.0 + 1e-9));
  CHECK(r.leak_ok);
}

TEST_CASE("runs are deterministic") {
  SolverConfig c = small_config();
  ProblemData d;
  d.u0 = gaussian_u0(c, 0.3, 4.0, 1.0);
  d.forcing = make_forcing(ForcingSpec{ForcingKind::Gaussian, 0.1, 5.0, 1.0, 0.05, 2.0, 1}, XGrid(c.N_x, c.X_max));
  const RunResult a = ZkSolver(c, d).run();
  const RunResult b = ZkSolver(c, d).run();
  CHECK(a.final_state.data() == b.final_state.data());
  CHECK(a.series.energy == b.series.energy);
}

TEST_CASE("configuration and blow-up errors") {
  SolverConfig c = small_config();
  c.scheme = TimeScheme::ExplicitRK4;
  c.dt = 1e-2;
  CHECK_THROWS_AS(ZkSolver(c, ProblemData{}), ConfigError);
  c = small_config();
  c.N_x = 8;
  CHECK_THROWS_AS(ZkSolver(c, ProblemData{}), ConfigError);
  c = small_config();
  c.nonlinearity = Nonlinearity::Saturated;
  c.h = 2.0;
  CHECK_THROWS_AS(ZkSolver(c, ProblemData{}), ConfigError);
  c = small_config();
  ProblemData d;
  d.u0 = gaussian_u0(c, 0.1, 4.0, 1.0);
  d.u0(1, 30) = std::numeric_limits<double>::quiet_NaN();
  const ZkSolver solver(c, d);
  Field u = solver.initial_state();
  CHECK_THROWS_AS(solver.step(u, 0.0, c.dt), BlowUpError);
  const RunResult r = solver.run();
  CHECK(r.blew_up);
  CHECK(r.blow_up_time == doctest::Approx(c.dt));
  CHECK_THROWS_AS(parse_nonlinearity("cubic"), ConfigError);
  CHECK_THROWS_AS(parse_time_scheme("euler"), ConfigError);
}
