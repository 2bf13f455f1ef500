#include <doctest.h>

#include "support.hpp"

using namespace mats;
using testing::max_abs_diff;
using testing::v2;

TEST_CASE("eval_A on the zero and constant models") {
  const MatrixFunction zero = zero_matrix_function(2);
  const AEval ez = eval_A(zero, v2(0.3, 0.4), v2(1, 2), 2);
  CHECK(ez.A.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& m : ez.dp) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& m : ez.dpp) CHECK(m.cwiseAbs().maxCoeff() == 0.0);

  const MatrixFunction id = identity_matrix_function(2);
  const AEval ei = eval_A(id, v2(0.3, 0.4), v2(1, 2), 1);
  CHECK(max_abs_diff(ei.A, MatrixXd::Identity(2, 2)) == 0.0);
  for (const auto& m : ei.dp) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sqrt profile: value at p = 0 and tensor symmetry") {
  const MatrixFunction mf = sqrt_profile_matrix_function(1.0);
  const AEval e = eval_A(mf, v2(0, 0), v2(0, 0), 2);
  CHECK(max_abs_diff(e.A, MatrixXd::Identity(2, 2)) < 1e-14);
  // closed-form tensor vs fourth-order differences at p = 0 and a generic p
  for (const Vec2& p : {Vec2(0, 0), Vec2(0.3, -0.2)}) {
    const auto closed = mf.hess_p(v2(0, 0), VectorXd(p));
    const auto fd = hess_p_fd4(mf, v2(0, 0), VectorXd(p));
    for (int i = 0; i < 4; ++i) CHECK(max_abs_diff(closed[i], fd[i]) < 1e-6);
    // symmetry in (i,j) and (k,l)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        CHECK(max_abs_diff(closed[k * 2 + l], closed[k * 2 + l].transpose()) < 1e-14);
        CHECK(max_abs_diff(closed[k * 2 + l], closed[l * 2 + k]) < 1e-14);
      }
  }
}

TEST_CASE("closed-form p-derivatives match differences on built-in profiles") {
  Rng rng(2024);
  for (const auto& mf : {sqrt_profile_matrix_function(-1.0), sqrt_profile_matrix_function(1.0),
                         log_profile_matrix_function(1.0)}) {
    for (int s = 0; s < 100; ++s) {
      const Vec2 p = Vec2(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
      const Vec2 x = Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1));
      const auto gc = mf.grad_p(VectorXd(x), VectorXd(p));
      const auto gf = grad_p_fd(mf, VectorXd(x), VectorXd(p));
      const auto hc = mf.hess_p(VectorXd(x), VectorXd(p));
      const auto hf = hess_p_fd(mf, VectorXd(x), VectorXd(p));
      for (int k = 0; k < 2; ++k) {
        const double scale = 1.0 + gc[k].cwiseAbs().maxCoeff();
        CHECK(max_abs_diff(gc[k], gf[k]) / scale < 1e-5);
      }
      for (int k = 0; k < 4; ++k) {
        const double scale = 1.0 + hc[k].cwiseAbs().maxCoeff();
        CHECK(max_abs_diff(hc[k], hf[k]) / scale < 1e-5);
      }
    }
  }
}

TEST_CASE("solve_Y on the linear-inversion costs") {
  const CostModel bil = bilinear_cost(v2(-3, -3), v2(3, 3));
  // D_x(-x.y) = -y, so Y(x,p) = -p for any x
  const VectorXd y1 = solve_Y(bil, v2(0.7, -0.1), v2(0.4, 0.5));
  CHECK(max_abs_diff(y1, v2(-0.4, -0.5)) < 1e-10);

  const CostModel quad = quadratic_cost(v2(-3, -3), v2(3, 3));
  // D_x(|x-y|^2/2) = x - y, so Y(x,p) = x - p
  const VectorXd y2 = solve_Y(quad, v2(0.7, -0.1), v2(0.4, 0.5));
  CHECK(max_abs_diff(y2, v2(0.3, -0.6)) < 1e-10);
}

TEST_CASE("solve_Y on the sqrt cost matches the closed inverse") {
  const CostModel cm = sqrt_cost(1.0, v2(-4, -4), v2(4, 4));
  const Vec2 x(0.2, -0.3), p(0.5, 0.3);
  const double g = std::sqrt(1.0 - p.squaredNorm());
  const Vec2 expected = x - p / g;
  const VectorXd y = solve_Y(cm, VectorXd(x), VectorXd(p));
  CHECK(max_abs_diff(y, VectorXd(expected)) < 1e-8);
  CHECK((cm.cx(VectorXd(x), y) - VectorXd(p)).norm() <= 1e-10);
}

TEST_CASE("solve_Y failure modes") {
  // working box too small: the inverse lands outside and is reported
  const CostModel tight = quadratic_cost(v2(-0.1, -0.1), v2(0.1, 0.1));
  CHECK_THROWS_AS(solve_Y(tight, v2(0, 0), v2(2, 0)), ModelError);

  // degenerate cost: c = x.y*0 has singular mixed Hessian
  CostModel degenerate = quadratic_cost(v2(-1, -1), v2(1, 1));
  degenerate.c = [](const VectorXd&, const VectorXd&) { return 0.0; };
  degenerate.grad_x = [](const VectorXd&, const VectorXd&) { return VectorXd::Zero(2); };
  degenerate.hess_xy = [](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(2, 2); };
  CHECK_THROWS_AS(solve_Y(degenerate, v2(0, 0), v2(0.5, 0)), ModelError);
}

TEST_CASE("A_from_cost reproduces the closed profiles") {
  const CostModel bil = bilinear_cost(v2(-3, -3), v2(3, 3));
  CHECK(A_from_cost(bil, v2(0.3, 0.1), v2(0.2, -0.2)).cwiseAbs().maxCoeff() < 1e-12);

  const CostModel quad = quadratic_cost(v2(-3, -3), v2(3, 3));
  CHECK(max_abs_diff(A_from_cost(quad, v2(0.3, 0.1), v2(0.2, -0.2)), MatrixXd::Identity(2, 2)) <
        1e-12);

  const CostModel sq = sqrt_cost(1.0, v2(-4, -4), v2(4, 4));
  const Vec2 p(0.5, 0.0);
  const MatrixXd a = A_from_cost(sq, v2(0.3, 0.4), VectorXd(p));
  const MatrixXd expected = sqrt_profile_matrix_function(1.0).value(v2(0.3, 0.4), VectorXd(p));
  CHECK(max_abs_diff(a, expected) < 1e-8);
}

TEST_CASE("problem_from_mapping with constant Jacobians") {
  GeneratingMap gm;
  gm.Y = [](const VectorXd& x, const VectorXd& p) -> VectorXd { return x - p; };
  gm.density = [](const VectorXd&, const VectorXd&) { return 2.5; };
  const ProblemSpec ps = problem_from_mapping(gm, testing::unit_square(), {});
  // Y_p = -I, Y_x = I  =>  A = I, B = psi
  CHECK(max_abs_diff(ps.A.value(v2(0.1, 0.2), v2(0.3, 0.4)), MatrixXd::Identity(2, 2)) < 1e-8);
  CHECK(ps.B.value(v2(0.1, 0.2), v2(0.3, 0.4)) == doctest::Approx(2.5).epsilon(1e-8));

  GeneratingMap flip;
  flip.Y = [](const VectorXd&, const VectorXd& p) -> VectorXd { return -p; };
  flip.density = [](const VectorXd&, const VectorXd&) { return 1.0; };
  const ProblemSpec ps2 = problem_from_mapping(flip, testing::unit_square(), {});
  CHECK(ps2.A.value(v2(0, 0), v2(0.3, 0.4)).cwiseAbs().maxCoeff() < 1e-8);

  GeneratingMap singular;
  singular.Y = [](const VectorXd& x, const VectorXd&) -> VectorXd { return x; };
  singular.density = [](const VectorXd&, const VectorXd&) { return 1.0; };
  const ProblemSpec ps3 = problem_from_mapping(singular, testing::unit_square(), {});
  CHECK_THROWS_AS(ps3.A.value(v2(0, 0), v2(0, 0)), ModelError);
}

TEST_CASE("mapping route agrees with the cost route on the sqrt family") {
  // Y(x,p) = x + p/sqrt(1-|p|^2) generates the same problem as the cost
  // -sqrt(1+|x-y|^2)
  GeneratingMap gm;
  gm.Y = [](const VectorXd& x, const VectorXd& p) -> VectorXd {
    return x + p / std::sqrt(1.0 - p.squaredNorm());
  };
  gm.density = [](const VectorXd&, const VectorXd&) { return 1.0; };
  const ProblemSpec from_map = problem_from_mapping(gm, testing::unit_square(), {});
  const CostModel cm = sqrt_cost(-1.0, v2(-6, -6), v2(6, 6));

  Rng rng(7);
  for (int s = 0; s < 100; ++s) {
    const Vec2 x(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const Vec2 p(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    const MatrixXd am = from_map.A.value(VectorXd(x), VectorXd(p));
    const MatrixXd ac = A_from_cost(cm, VectorXd(x), VectorXd(p));
    CHECK(max_abs_diff(am, ac) < 1e-6);
  }
}

TEST_CASE("quadratic-cost model is constant in x and p") {
  const CostModel quad = quadratic_cost(v2(-3, -3), v2(3, 3));
  Rng rng(11);
  for (int s = 0; s < 50; ++s) {
    const Vec2 x(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec2 p(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(max_abs_diff(A_from_cost(quad, VectorXd(x), VectorXd(p)), MatrixXd::Identity(2, 2)) <
          1e-10);
  }
}

TEST_CASE("affine transform: identity and pure scaling") {
  const MatrixFunction A0 = zero_matrix_function(2);
  ScalarB B1;
  B1.value = [](const VectorXd&, const VectorXd&) { return 1.0; };

  auto [Ai, Bi] = transform_model(A0, B1, AffineMap::identity(2));
  CHECK(Ai.value(v2(0.2, 0.3), v2(1, 1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Bi.value(v2(0.2, 0.3), v2(1, 1)) == doctest::Approx(1.0));

  // y = 2x: det J = 4, B' = B/16; A stays zero (affine, no curvature term)
  AffineMap twice{2.0 * MatrixXd::Identity(2, 2), VectorXd::Zero(2)};
  auto [At, Bt] = transform_model(A0, B1, twice);
  CHECK(At.value(v2(0.2, 0.3), v2(1, 1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Bt.value(v2(0.2, 0.3), v2(1, 1)) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("affine transform round-trips to the original model") {
  const MatrixFunction A = sqrt_profile_matrix_function(-1.0);
  ScalarB B;
  B.value = [](const VectorXd& x, const VectorXd& p) {
    return 1.0 + 0.3 * x.squaredNorm() + 0.1 * p.squaredNorm();
  };
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    MatrixXd M(2, 2);
    do {
      M << rng.uniform(-1.5, 1.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
          rng.uniform(-1.5, 1.5);
    } while (std::abs(M.determinant()) < 0.3);
    AffineMap map{M, VectorXd(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)))};
    auto [At, Bt] = transform_model(A, B, map);
    auto [Ab, Bb] = transform_model(At, Bt, map.inverse());
    for (int s = 0; s < 20; ++s) {
      const VectorXd x = v2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
      const VectorXd p = v2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
      const MatrixXd a0 = A.value(x, p), a2 = Ab.value(x, p);
      CHECK(max_abs_diff(a0, a2) <= 1e-8 * (1.0 + a0.cwiseAbs().maxCoeff()));
      CHECK(Bb.value(x, p) == doctest::Approx(B.value(x, p)).epsilon(1e-8));
    }
  }
}

TEST_CASE("transform_problem maps representable domains") {
  GoldenInstance gi = golden_instance("ma-exp");
  AffineMap scale{2.0 * MatrixXd::Identity(2, 2), VectorXd(v2(1.0, 0.0))};
  const ProblemSpec ps = transform_problem(gi.problem, scale);
  CHECK(ps.domain.lo.x() == doctest::Approx(0.0));
  CHECK(ps.domain.hi.x() == doctest::Approx(2.0));
  // boundary data pulls back
  CHECK(ps.phi(Vec2(1.0, 1.0)) == doctest::Approx(gi.problem.phi(Vec2(0.0, 0.5))));

  MatrixXd rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  CHECK_THROWS_AS(transform_problem(gi.problem, AffineMap{rot + 0.3 * MatrixXd::Identity(2, 2),
                                                          VectorXd::Zero(2)}),
                  ModelError);
}
