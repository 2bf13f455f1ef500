#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace mats;
using testing::laplace_like;
using testing::unit_square;

TEST_CASE("linearized operator on constant-coefficient cases") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const ProblemSpec ps = laplace_like(unit_square(), {});
  const auto r2 = [](const Vec2& x) { return x.squaredNorm(); };
  const EllipticIterate it = assemble_w(ps, ScalarField::from_function(g, r2));

  // w = 2I so F = I/2; applying to x1^2 gives F^11 * 2 = 1
  const ScalarField probe =
      ScalarField::from_function(g, [](const Vec2& x) { return x.x() * x.x(); });
  const VectorXd lp = apply_operator(ps, it, probe);
  for (int k = 0; k < lp.size(); ++k) CHECK(lp[k] == doctest::Approx(1.0).epsilon(1e-9));

  // affine fields: only first-order terms act; with A = 0 and B constant the
  // drift vanishes entirely
  const ScalarField aff =
      ScalarField::from_function(g, [](const Vec2& x) { return 3.0 * x.x() - 2.0 * x.y() + 1.0; });
  const VectorXd la = apply_operator(ps, it, aff);
  for (int k = 0; k < la.size(); ++k) CHECK(std::abs(la[k]) < 1e-10);
}

TEST_CASE("assembled rows stay within the nine-point footprint") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const GoldenInstance gi = golden_instance("ma-exp");
  const ScalarField sub = ScalarField::from_function(g, gi.problem.subsolution);
  const EllipticIterate sit = assemble_w(gi.problem, sub);
  const LinearizedSystem sys = assemble_linearized(gi.problem, sit, 0.5, &sit, SolverConfig{});

  // allowed[row] = stored indices of the 9-point neighborhood
  std::vector<std::set<int>> allowed(g->n_stored());
  for (int k = 0; k < g->n_interior(); ++k) {
    const int row = g->interior_nodes[k];
    const int c = g->node_cell[row];
    const int i = c % (g->nx + 1), j = c / (g->nx + 1);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (g->kind(i + di, j + dj) == NodeKind::Exterior) continue;
        allowed[row].insert(g->stored[g->cell_index(i + di, j + dj)]);
      }
  }
  for (int col = 0; col < sys.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator itr(sys.matrix, col); itr; ++itr) {
      if (itr.value() == 0.0) continue;
      const int row = static_cast<int>(itr.row());
      if (g->interior_ordinal_of[row] < 0) continue;  // boundary identity row
      CHECK(allowed[row].count(static_cast<int>(itr.col())) == 1);
    }
  }
}

TEST_CASE("jacobian matches directional derivatives of the residual") {
  const GridPtr g = Grid::build(unit_square(), 1.0 / 12);
  const GoldenInstance gi = golden_instance("ma-exp");
  const ScalarField sub = ScalarField::from_function(g, gi.problem.subsolution);
  const EllipticIterate sit = assemble_w(gi.problem, sub);

  // iterate away from the solution, boundary data already imposed
  ScalarField u0 = ScalarField::from_function(g, [&](const Vec2& x) {
    return 1.1 * x.squaredNorm() + 0.05;
  });
  const EllipticIterate it = assemble_w(gi.problem, u0);
  const double t = 0.7;
  const VectorXd base = residual(gi.problem, it, t, &sit);

  Rng rng(99);
  int tested = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // random interior direction, zero at the boundary
    ScalarField delta = ScalarField::zeros(g);
    for (int k = 0; k < g->n_interior(); ++k)
      delta.values[g->interior_nodes[k]] = rng.uniform(-1.0, 1.0);
    delta.boundary_fn = [](const Vec2&) { return 0.0; };

    // analytic directional derivative via the assembled operator coefficients
    VectorXd ld(g->n_interior());
    const auto dd = derivatives(delta);
    for (int k = 0; k < g->n_interior(); ++k) {
      const OperatorCoefficients oc = operator_coefficients(gi.problem, it, t, &sit, k);
      ld[k] = (oc.F.array() * dd[k].hess.array()).sum() - oc.drift.dot(dd[k].grad);
    }

    double prev_err = std::numeric_limits<double>::infinity();
    bool first_order = true;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      ScalarField pert = u0;
      pert.values += eps * delta.values;
      const VectorXd fd =
          (residual(gi.problem, assemble_w(gi.problem, pert), t, &sit) - base) / eps;
      const double err = (fd - ld).lpNorm<Eigen::Infinity>();
      if (std::isfinite(prev_err)) {
        // one decade of eps should shrink the error close to one decade
        first_order = first_order && (err < 0.3 * prev_err || err < 1e-8);
      }
      prev_err = err;
    }
    CHECK(first_order);
    ++tested;
  }
  CHECK(tested == 20);
}

TEST_CASE("newton step from the exact discrete solution is a no-op") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  ProblemSpec ps = laplace_like(unit_square(), [](const Vec2& x) { return 0.5 * x.squaredNorm(); });
  const EllipticIterate it = assemble_w(
      ps, ScalarField::from_function(g, [](const Vec2& x) { return 0.5 * x.squaredNorm(); }));
  const NewtonOutcome out = newton_step(ps, it, 1.0, SolverConfig{}, nullptr);
  CHECK(out.alpha == 1.0);
  CHECK(out.step_max <= 1e-12);
  CHECK(out.residual_norm <= 1e-12);
}

TEST_CASE("newton rejects a non-elliptic start") {
  const GridPtr g = Grid::build(unit_square(), 0.125);
  const ProblemSpec ps = laplace_like(unit_square(), {});
  const EllipticIterate it = assemble_w(
      ps, ScalarField::from_function(g, [](const Vec2& x) { return -x.squaredNorm(); }));
  CHECK_THROWS_AS(static_cast<void>(newton_step(ps, it, 1.0, SolverConfig{}, nullptr)),
                  SolveError);
}

TEST_CASE("newton converges quadratically near the solution") {
  // A = 0 with the manufactured right side, started at the subsolution with
  // target boundary data already imposed
  const GridPtr g = Grid::build(unit_square(), 1.0 / 16);
  const GoldenInstance gi = golden_instance("ma-exp");
  ScalarField u = ScalarField::from_function(g, gi.problem.subsolution);
  for (int b : g->boundary_nodes) u.values[b] = gi.problem.phi(g->position[b]);
  u.boundary_fn = gi.problem.phi;

  EllipticIterate it = assemble_w(gi.problem, u);
  REQUIRE(it.elliptic);
  std::vector<double> history;
  history.push_back(residual(gi.problem, it, 1.0, nullptr).lpNorm<Eigen::Infinity>());
  for (int k = 0; k < 30 && history.back() > 1e-11; ++k) {
    const NewtonOutcome out = newton_step(gi.problem, it, 1.0, SolverConfig{}, nullptr);
    it = out.next;
    history.push_back(out.residual_norm);
  }
  REQUIRE(history.back() <= 1e-11);
  REQUIRE(history.size() >= 4);
  // quadratic tail: successive ratios far under 0.3 near convergence
  const size_t n = history.size();
  for (size_t i = n - 3; i < n; ++i) CHECK(history[i] / history[i - 1] <= 0.3);
}

TEST_CASE("degenerate homotopy solves in one outer step") {
  // B equals det w(subsolution) pointwise, so every t has the same solution
  const GridPtr g = Grid::build(unit_square(), 0.125);
  ProblemSpec ps = laplace_like(unit_square(), [](const Vec2& x) { return 0.5 * x.squaredNorm(); });
  ps.subsolution = ps.phi;
  const ScalarField sub = ScalarField::from_function(g, ps.subsolution);
  SolverConfig cfg;
  cfg.t_init = 1.0;
  const ContinuationResult r = continuation_solve(ps, sub, cfg);
  CHECK(r.status == SolveStatus::Converged);
  REQUIRE(r.steps.size() == 2);  // t = 0 record plus the single jump to t = 1
  CHECK(r.steps.back().t == 1.0);
  CHECK(r.steps.back().newton_iterations == 0);
  CHECK(r.steps.back().residual_norm <= 1e-12);
}

TEST_CASE("continuation on the manufactured instance") {
  const GoldenInstance gi = golden_instance("ma-exp");
  const GridPtr g = Grid::build(gi.problem.domain, 1.0 / 16);
  const ScalarField sub = ScalarField::from_function(g, gi.problem.subsolution);
  const ContinuationResult r = continuation_solve(gi.problem, sub, SolverConfig{});
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.steps.back().t == 1.0);
  CHECK(r.steps.back().residual_norm <= 1e-9);
  CHECK(r.min_eig_over_run > 0.0);

  // t strictly increasing from 0
  for (size_t i = 1; i < r.steps.size(); ++i) CHECK(r.steps[i].t > r.steps[i - 1].t);
  CHECK(r.steps.front().t == 0.0);
  CHECK(r.steps.front().residual_norm == 0.0);

  // boundary data exact at the final iterate
  for (int b : g->boundary_nodes) {
    CHECK(r.final.u.values[b] == gi.problem.phi(g->position[b]));
  }

  // solution error at the manufactured rate scale
  double err = 0.0;
  for (int k = 0; k < g->n_stored(); ++k)
    err = std::max(err, std::abs(r.final.u.values[k] - gi.exact(g->position[k])));
  CHECK(err < 5e-4);

  // comparison against the subsolution
  const ComparisonReport cmp = comparison_check(r.final.u, sub);
  CHECK(cmp.pass);
  CHECK(cmp.min_difference >= -1e-8);
}

TEST_CASE("comparison report basics") {
  const GridPtr g = Grid::build(unit_square(), 0.25);
  const ScalarField a = ScalarField::from_function(g, [](const Vec2& x) { return x.x(); });
  CHECK(comparison_check(a, a).min_difference == 0.0);
  CHECK(comparison_check(a, a).pass);

  ScalarField below = a;
  below.values.array() -= 0.1;
  CHECK(comparison_check(a, below).pass);
  CHECK_FALSE(comparison_check(below, a).pass);
}

TEST_CASE("continuation reports a stall instead of looping") {
  // impossible target: B wildly larger than anything the boundary data allows
  const GridPtr g = Grid::build(unit_square(), 0.125);
  ProblemSpec ps = laplace_like(unit_square(), [](const Vec2& x) { return 0.5 * x.squaredNorm(); });
  ps.B.value = [](const VectorXd&, const VectorXd&) { return 1e12; };
  ps.subsolution = ps.phi;
  SolverConfig cfg;
  cfg.max_newton = 8;
  const ContinuationResult r =
      continuation_solve(ps, ScalarField::from_function(g, ps.subsolution), cfg);
  CHECK(r.status != SolveStatus::Converged);
  CHECK_FALSE(r.failure_reason.empty());
}
