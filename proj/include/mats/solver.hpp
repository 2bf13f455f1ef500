#pragma once

#include <Eigen/SparseCore>

#include "mats/discretize.hpp"

namespace mats {

struct SolverConfig {
  double tol = 1e-9;             // residual max-norm target per continuation step
  int max_newton = 30;           // Newton iterations per step
  double t_init = 0.25;          // first continuation increment
  double t_min = 1e-4;           // smallest increment before declaring a stall
  double eps_ell_factor = 1e-10; // ellipticity floor = factor*(1+max|w|)
  int max_line_search = 10;      // alpha down to 2^-10
};

/// Linearization of the continuation residual at a strictly elliptic iterate:
/// interior rows carry the discrete operator
///   F^{ij}(D_ij - D_{p_k}A_ij D_k) - s Btilde_{p_k} D_k,
/// with F = w^{-1} and s = tB/(tB + (1-t) det w_sub) the weight the
/// t-blended right side puts on the gradient dependence of B; boundary rows
/// are identity (increment 0). The right-hand side is -residual.
struct LinearizedSystem {
  Eigen::SparseMatrix<double> matrix;  // over stored nodes
  VectorXd rhs;
};

/// Coefficients of the linearized operator at one interior node.
struct OperatorCoefficients {
  Mat2 F;      // inverse of w
  Vec2 drift;  // coefficient of -D_k
};

/// Ellipticity floor used by the solver at a given iterate.
double ellipticity_floor(const SolverConfig& cfg, const EllipticIterate& it);

OperatorCoefficients operator_coefficients(const ProblemSpec& ps, const EllipticIterate& it,
                                           double t, const EllipticIterate* subsol, int ordinal);

LinearizedSystem assemble_linearized(const ProblemSpec& ps, const EllipticIterate& it, double t,
                                     const EllipticIterate* subsol, const SolverConfig& cfg);

/// Applies the linearized operator (t = 1 coefficients at the given iterate)
/// to an arbitrary field; used by the barrier certificate.
VectorXd apply_operator(const ProblemSpec& ps, const EllipticIterate& it, const ScalarField& f);

/// Sum of the diagonal of F = w^{-1} per interior node.
VectorXd trace_F(const EllipticIterate& it);

struct NewtonOutcome {
  EllipticIterate next;
  double alpha = 0.0;
  double residual_norm = 0.0;
  double step_max = 0.0;  // max-norm of the accepted increment
};

/// One damped Newton step: solves the linearized system and takes the largest
/// alpha in {1, 1/2, ..., 2^-10} keeping the iterate strictly elliptic and
/// decreasing the residual max-norm. Throws SolveError when no alpha is
/// admissible ("line search failed") or when the iterate violates the
/// ellipticity floor.
NewtonOutcome newton_step(const ProblemSpec& ps, const EllipticIterate& it, double t,
                          const SolverConfig& cfg, const EllipticIterate* subsol);

enum class SolveStatus { Converged, Stalled, EllipticityLost };

struct StepRecord {
  double t = 0.0;
  int newton_iterations = 0;
  double residual_norm = 0.0;
  double min_eig = 0.0;
  double alpha = 1.0;
  bool accepted = true;
  std::vector<double> residual_history;  // after each Newton iteration
};

struct ContinuationResult {
  SolveStatus status = SolveStatus::Stalled;
  std::vector<StepRecord> steps;  // accepted steps, t strictly increasing
  EllipticIterate final;          // last accepted iterate
  double min_eig_over_run = 0.0;  // over every accepted iterate
  std::string trace;              // one line per Newton step: t,iter,residual,min_eig,alpha
  std::string failure_reason;
};

using StepObserver = std::function<void(double t, const EllipticIterate&)>;

/// Continuation from the subsolution: at t = 0 the subsolution solves the
/// blended problem exactly (both the right side and the boundary data are
/// blended toward the target as t -> 1, so instances whose subsolution trace
/// differs from phi still start from an exact solution). The increment
/// doubles after steps needing <= 3 Newton iterations and halves on failure.
ContinuationResult continuation_solve(const ProblemSpec& ps, const ScalarField& subsolution,
                                      const SolverConfig& cfg, const StepObserver& observer = {});

struct ComparisonReport {
  double min_difference = 0.0;
  bool pass = false;
};

/// min over stored nodes of u - subsolution, pass when >= -1e-8.
ComparisonReport comparison_check(const ScalarField& u, const ScalarField& subsolution);

}  // namespace mats
