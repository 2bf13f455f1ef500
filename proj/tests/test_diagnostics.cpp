#include <doctest.h>

#include "support.hpp"

using namespace mats;
using testing::laplace_like;
using testing::unit_disc;
using testing::unit_square;
using testing::v2;

TEST_CASE("weighted functional with zero weights is the largest eigenvalue") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const ProblemSpec ps = laplace_like(unit_square(), {});
  const auto r2 = [](const Vec2& x) { return x.squaredNorm(); };
  const ScalarField u = ScalarField::from_function(g, r2);
  const EllipticIterate it = assemble_w(ps, u);

  const PogorelovResult res = pogorelov_functional(it, u, 0.0, 0.0, 1.0);
  for (int k = 0; k < res.field.size(); ++k)
    CHECK(res.field[k] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(res.max_value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("functional weight at u equal to the reference field") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const ProblemSpec ps = laplace_like(unit_square(), {});
  const auto r2 = [](const Vec2& x) { return x.squaredNorm(); };
  const ScalarField u = ScalarField::from_function(g, r2);
  const EllipticIterate it = assemble_w(ps, u);

  const double a = 0.3, b = 0.7;
  const PogorelovResult res = pogorelov_functional(it, u, a, b, 8.0);
  for (int k = 0; k < g->n_interior(); ++k) {
    const double du2 = it.derivs[k].grad.squaredNorm();
    const double expected = std::exp(0.5 * a * du2 + b) * 2.0;  // phi = 1, w = 2I
    CHECK(res.field[k] == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("functional is invariant under a common constant shift") {
  const GoldenInstance gi = golden_instance("ma-exp");
  const GridPtr g = Grid::build(gi.problem.domain, 1.0 / 16);
  const ScalarField sub = ScalarField::from_function(g, gi.problem.subsolution);
  const ScalarField u = ScalarField::from_function(g, gi.exact);
  const EllipticIterate it = assemble_w(gi.problem, u);

  ScalarField u_shift = u;
  u_shift.values.array() += 5.0;
  ScalarField sub_shift = sub;
  sub_shift.values.array() += 5.0;
  const EllipticIterate it_shift = assemble_w(gi.problem, u_shift);

  const PogorelovResult a = pogorelov_functional(it, sub, 0.2, 1.0, 4.0);
  const PogorelovResult b = pogorelov_functional(it_shift, sub_shift, 0.2, 1.0, 4.0);
  CHECK((a.field - b.field).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("estimate report on an exact quadratic") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  ProblemSpec ps = laplace_like(unit_square(), [](const Vec2& x) { return 0.5 * x.squaredNorm(); });
  const auto half = [](const Vec2& x) { return 0.5 * x.squaredNorm(); };
  const ScalarField u = ScalarField::from_function(g, half);
  const EllipticIterate it = assemble_w(ps, u);

  const EstimateReport rep = estimate_report(ps, it, u, 1.0);
  CHECK(rep.sup_hess_interior == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.sup_hess_boundary == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.c_est == doctest::Approx(0.5).epsilon(1e-9));
  // subsolution equal to the iterate: the solution bound collapses to
  // max(|u|, |phi|)
  CHECK(rep.K0_bound == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(rep.K0_observed <= rep.K0_bound + 1e-12);
  CHECK(rep.min_boundary_w > 0.0);
}

TEST_CASE("boundary tangential w on the disc") {
  const GridPtr g = Grid::build(unit_disc(), 0.1);
  const ProblemSpec ps = laplace_like(unit_disc(), {});
  const auto r2 = [](const Vec2& x) { return x.squaredNorm(); };
  const EllipticIterate it = assemble_w(ps, ScalarField::from_function(g, r2));
  const BoundaryWResult res = boundary_w(ps, it);
  CHECK(res.values.size() > 0);
  for (int k = 0; k < res.values.size(); ++k)
    CHECK(res.values[k] == doctest::Approx(2.0).epsilon(1e-6));

  // a concave field is flagged by a negative minimum
  const EllipticIterate bad = assemble_w(
      ps, ScalarField::from_function(g, [](const Vec2& x) { return -x.squaredNorm(); }));
  CHECK(boundary_w(ps, bad).min_value < 0.0);
}

TEST_CASE("transport residual vanishes for the exact quadratic-cost map") {
  const GoldenInstance gi = golden_instance("ot-quadratic");
  const GridPtr g = Grid::build(gi.problem.domain, 0.125);
  const EllipticIterate it = assemble_w(gi.problem, ScalarField::from_function(g, gi.exact));
  auto Y = [cm = *gi.cost](const VectorXd& x, const VectorXd& p) { return solve_Y(cm, x, p); };
  const TransportResidualResult tr = transport_residual(Y, it, gi.psi);
  CHECK(tr.max_abs <= 1e-9);
}

TEST_CASE("transport residual for the bilinear cost map") {
  // c = -x.y: T = -Du; u = |x|^2/2 maps to -x with |det DT| = 1
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const ProblemSpec ps = laplace_like(unit_square(), {});
  const EllipticIterate it = assemble_w(
      ps, ScalarField::from_function(g, [](const Vec2& x) { return 0.5 * x.squaredNorm(); }));
  const CostModel bil = bilinear_cost(v2(-4, -4), v2(4, 4));
  auto Y = [bil](const VectorXd& x, const VectorXd& p) { return solve_Y(bil, x, p); };
  auto psi1 = [](const VectorXd&, const VectorXd&) { return 1.0; };
  const TransportResidualResult tr = transport_residual(Y, it, psi1);
  CHECK(tr.max_abs <= 1e-9);
}

TEST_CASE("convergence study reports second order on the manufactured instance") {
  const GoldenInstance gi = golden_instance("ma-exp");
  const StudyResult sr = convergence_study(gi.problem, gi.problem.subsolution, gi.exact,
                                           {1.0 / 8, 1.0 / 16}, SolverConfig{});
  REQUIRE(sr.complete);
  REQUIRE(sr.rows.size() == 2);
  CHECK(sr.rows[1].observed_order > 1.5);
  CHECK(sr.rows[1].observed_order < 2.5);
  CHECK(sr.csv().find("h,error,observed_order") == 0);
}

TEST_CASE("convergence study is exact for quadratic solutions") {
  const GoldenInstance gi = golden_instance("ot-quadratic");
  const StudyResult sr = convergence_study(gi.problem, gi.problem.subsolution, gi.exact,
                                           {1.0 / 8, 1.0 / 16}, SolverConfig{});
  REQUIRE(sr.complete);
  for (const auto& row : sr.rows) CHECK(row.error <= 1e-9);
}

TEST_CASE("convergence study aborts cleanly on an unsolvable instance") {
  ProblemSpec ps = laplace_like(unit_square(), [](const Vec2& x) { return 0.5 * x.squaredNorm(); });
  ps.B.value = [](const VectorXd&, const VectorXd&) { return 1e12; };
  ps.subsolution = ps.phi;
  SolverConfig cfg;
  cfg.max_newton = 5;
  const StudyResult sr =
      convergence_study(ps, ps.subsolution, ps.phi, {1.0 / 8, 1.0 / 16}, cfg);
  CHECK_FALSE(sr.complete);
  CHECK_FALSE(sr.failure.empty());
}
