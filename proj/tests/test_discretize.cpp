#include <doctest.h>

#include "support.hpp"

using namespace mats;
using testing::laplace_like;
using testing::unit_square;

TEST_CASE("assemble_w trivial cases") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const auto r2 = [](const Vec2& x) { return x.squaredNorm(); };

  // A = 0, u = |x|^2: w = 2I, elliptic
  {
    const ProblemSpec ps = laplace_like(unit_square(), r2);
    const EllipticIterate it = assemble_w(ps, ScalarField::from_function(g, r2));
    CHECK(it.elliptic);
    for (const Mat2& w : it.w) CHECK(testing::max_abs_diff(w, 2.0 * Mat2::Identity()) < 1e-9);
  }
  // A = I, u = |x|^2: w = I
  {
    ProblemSpec ps = laplace_like(unit_square(), r2);
    ps.A = identity_matrix_function(2);
    const EllipticIterate it = assemble_w(ps, ScalarField::from_function(g, r2));
    CHECK(it.elliptic);
    for (int k = 0; k < g->n_interior(); ++k) {
      CHECK(testing::max_abs_diff(it.w[k], Mat2::Identity()) < 1e-9);
      CHECK(it.min_eig_w[k] == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  // A = I, u = |x|^2/4: w = -I/2, not elliptic (a state, not an error)
  {
    ProblemSpec ps = laplace_like(unit_square(), r2);
    ps.A = identity_matrix_function(2);
    const EllipticIterate it =
        assemble_w(ps, ScalarField::from_function(g, [](const Vec2& x) {
          return 0.25 * x.squaredNorm();
        }));
    CHECK_FALSE(it.elliptic);
    for (const Mat2& w : it.w)
      CHECK(testing::max_abs_diff(w, -0.5 * Mat2::Identity()) < 1e-9);
  }
}

TEST_CASE("residual endpoints") {
  const GridPtr g = Grid::build(unit_square(), 0.125);

  // t = 0 with u equal to the subsolution: identically zero
  {
    const GoldenInstance gi = golden_instance("ma-exp");
    const ScalarField sub = ScalarField::from_function(g, gi.problem.subsolution);
    const EllipticIterate sit = assemble_w(gi.problem, sub);
    const VectorXd r = residual(gi.problem, sit, 0.0, &sit);
    CHECK(r.lpNorm<Eigen::Infinity>() == 0.0);
  }
  // t = 1, A = 0, B = 1, u = |x|^2/2: det w = 1, residual 0
  {
    const ProblemSpec ps = laplace_like(unit_square(), {});
    const EllipticIterate it = assemble_w(
        ps, ScalarField::from_function(g, [](const Vec2& x) { return 0.5 * x.squaredNorm(); }));
    CHECK(residual(ps, it, 1.0, nullptr).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  // t = 1, A = I, B = 1, u = |x|^2: det(2I - I) = 1
  {
    ProblemSpec ps = laplace_like(unit_square(), {});
    ps.A = identity_matrix_function(2);
    const EllipticIterate it = assemble_w(
        ps, ScalarField::from_function(g, [](const Vec2& x) { return x.squaredNorm(); }));
    CHECK(residual(ps, it, 1.0, nullptr).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("residual names the non-elliptic node") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const ProblemSpec ps = laplace_like(unit_square(), {});
  const EllipticIterate it = assemble_w(
      ps, ScalarField::from_function(g, [](const Vec2& x) { return -x.squaredNorm(); }));
  CHECK_THROWS_AS(static_cast<void>(residual(ps, it, 1.0, nullptr)), NonEllipticError);
  try {
    static_cast<void>(residual(ps, it, 1.0, nullptr));
  } catch (const NonEllipticError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("residual is Lipschitz in the continuation parameter") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const GoldenInstance gi = golden_instance("ma-exp");
  const ScalarField sub = ScalarField::from_function(g, gi.problem.subsolution);
  const EllipticIterate sit = assemble_w(gi.problem, sub);
  // a fixed iterate strictly between subsolution and solution
  const EllipticIterate it = assemble_w(
      gi.problem, ScalarField::from_function(g, [](const Vec2& x) {
        return 1.2 * x.squaredNorm() + 0.1;
      }));

  // node-wise bound L = |B - det w_sub| / min(B, det w_sub)
  VectorXd L(g->n_interior());
  for (int k = 0; k < g->n_interior(); ++k) {
    const Vec2& x = g->position[g->interior_nodes[k]];
    const double b = gi.problem.B.value(VectorXd(x), VectorXd(it.derivs[k].grad));
    const double d = sit.det_w[k];
    L[k] = std::abs(b - d) / std::min(b, d);
  }
  const double ts[] = {0.0, 0.3, 0.45, 0.8, 1.0};
  for (double t1 : ts) {
    for (double t2 : ts) {
      const VectorXd r1 = residual(gi.problem, it, t1, &sit);
      const VectorXd r2 = residual(gi.problem, it, t2, &sit);
      for (int k = 0; k < g->n_interior(); ++k)
        CHECK(std::abs(r1[k] - r2[k]) <= L[k] * std::abs(t1 - t2) + 1e-12);
    }
  }
}

TEST_CASE("residual at the manufactured solution decays at second order") {
  const GoldenInstance gi = golden_instance("ma-exp");
  auto res_at = [&](double h) {
    const GridPtr g = Grid::build(gi.problem.domain, h);
    const EllipticIterate it = assemble_w(gi.problem, ScalarField::from_function(g, gi.exact));
    return residual(gi.problem, it, 1.0, nullptr).lpNorm<Eigen::Infinity>();
  };
  const double r1 = res_at(1.0 / 8), r2 = res_at(1.0 / 16), r3 = res_at(1.0 / 32);
  CHECK(r1 / r2 > 3.3);
  CHECK(r1 / r2 < 4.7);
  CHECK(r2 / r3 > 3.5);
  CHECK(r2 / r3 < 4.5);
}

TEST_CASE("field serialization") {
  const GridPtr g = Grid::build(unit_square(), 0.25);
  const ScalarField f =
      ScalarField::from_function(g, [](const Vec2& x) { return x.x() + 2.0 * x.y(); });
  std::ostringstream csv;
  write_csv(f, csv);
  CHECK(csv.str().rfind("x1,x2,value\n", 0) == 0);
  // one row per stored node plus header
  int lines = 0;
  for (char c : csv.str())
    if (c == '\n') ++lines;
  CHECK(lines == g->n_stored() + 1);

  std::ostringstream vtk;
  write_vtk(f, vtk, "u");
  CHECK(vtk.str().find("STRUCTURED_POINTS") != std::string::npos);
  CHECK(vtk.str().find("SCALARS u double 1") != std::string::npos);
}
