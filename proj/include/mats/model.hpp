#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mats/geometry.hpp"

namespace mats {

/// Symmetric matrix function A(x,p) together with (optional) closed-form
/// derivatives in p. When no closed forms are supplied, central finite
/// differences with step h_p = fd_scale*(1+|p|) are used. The evaluators are
/// written for general dimension; the discrete solver instantiates them with
/// n = 2.
struct MatrixFunction {
  int dim = 2;
  std::function<MatrixXd(const VectorXd& x, const VectorXd& p)> value;
  /// grad_p(x,p)[k] = D_{p_k} A   (optional)
  std::function<std::vector<MatrixXd>(const VectorXd&, const VectorXd&)> grad_p;
  /// hess_p(x,p)[k*dim+l] = D^2_{p_k p_l} A   (optional)
  std::function<std::vector<MatrixXd>(const VectorXd&, const VectorXd&)> hess_p;
  double fd_scale = 1e-4;

  bool has_grad() const { return static_cast<bool>(grad_p); }
  bool has_hess() const { return static_cast<bool>(hess_p); }
};

/// Evaluation bundle for A and its p-derivatives up to the requested order.
struct AEval {
  MatrixXd A;
  std::vector<MatrixXd> dp;   // order >= 1
  std::vector<MatrixXd> dpp;  // order == 2
};

/// Evaluates A at (x,p); order 1 adds D_{p_k}A, order 2 adds the full
/// second-derivative tensor (closed forms when available, otherwise
/// second-order central differences).
AEval eval_A(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p, int order);

/// Second p-derivative tensor by fourth-order central differences; used by
/// the regularity check where the tensor of a numerically generated A must be
/// resolved accurately.
std::vector<MatrixXd> hess_p_fd4(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p);

/// First p-derivatives by second-order central differences (ignores any
/// closed form; test utility).
std::vector<MatrixXd> grad_p_fd(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p);
std::vector<MatrixXd> hess_p_fd(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p);

/// Positive scalar right-hand side B(x,p) with optional closed-form p-gradient.
struct ScalarB {
  std::function<double(const VectorXd& x, const VectorXd& p)> value;
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad_p;  // optional
  double fd_scale = 1e-4;
};

/// D_p B by closed form or central differences.
VectorXd b_grad_p(const ScalarB& b, const VectorXd& x, const VectorXd& p);

/// A full Dirichlet problem instance: det(D2u - A(x,Du)) = B(x,Du) in Omega,
/// u = phi on the boundary, with an optional subsolution used to start the
/// continuation path.
struct ProblemSpec {
  std::string name;
  Domain domain;
  MatrixFunction A;
  ScalarB B;
  ScalarFn phi;
  ScalarFn subsolution;  // may be empty
};

/// Cost function c(x,y) with the derivative blocks needed to generate A and B.
/// Missing closed forms fall back to central differences with steps
/// fd_scale*(1+|.|). The working box bounds the Newton inversion for Y.
struct CostModel {
  int dim = 2;
  std::function<double(const VectorXd& x, const VectorXd& y)> c;
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad_x;   // D_x c
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad_y;   // D_y c
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> hess_xx;  // D^2_x c
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> hess_xy;  // D^2_{x,y} c
  VectorXd y_lo, y_hi;  // working box for y
  double newton_tol = 1e-10;
  double det_floor = 1e-8;
  int max_iterations = 50;
  double fd_scale = 1e-6;

  VectorXd cx(const VectorXd& x, const VectorXd& y) const;
  MatrixXd cxx(const VectorXd& x, const VectorXd& y) const;
  MatrixXd cxy(const VectorXd& x, const VectorXd& y) const;
  VectorXd cy(const VectorXd& x, const VectorXd& y) const;
  VectorXd box_center() const { return 0.5 * (y_lo + y_hi); }
};

/// Solves D_x c(x,y) = p for y by Newton from y0 (working-box center when
/// absent). Throws ModelError on divergence ("bad initial guess or no unique
/// inverse"), on a mixed-Hessian determinant under det_floor ("degenerate
/// cost"), and when the converged point escapes the working box.
VectorXd solve_Y(const CostModel& cm, const VectorXd& x, const VectorXd& p,
                 const VectorXd* y0 = nullptr);

/// A(x,p) = D^2_x c(x, Y(x,p)).
MatrixXd A_from_cost(const CostModel& cm, const VectorXd& x, const VectorXd& p,
                     const VectorXd* y0 = nullptr);

/// Wraps a cost model as a MatrixFunction (derivatives by differences). The
/// returned evaluator keeps a warm-start value for the Y inversion; it is
/// intended for use within one solver pass, not shared across threads.
MatrixFunction matrix_function_from_cost(const CostModel& cm);

/// B(x,p) = |det D^2_{x,y} c(x,Y(x,p))| * psi(x,p).
ScalarB scalar_b_from_cost(const CostModel& cm,
                           std::function<double(const VectorXd&, const VectorXd&)> psi);

/// Mapping Y(x,p) with prescribed density psi; generates the equivalent
/// problem with A = -Y_p^{-1} Y_x and B = |det Y_p|^{-1} psi.
struct GeneratingMap {
  int dim = 2;
  std::function<VectorXd(const VectorXd& x, const VectorXd& p)> Y;
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> Y_x;  // optional
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> Y_p;  // optional
  std::function<double(const VectorXd&, const VectorXd&)> density;
  double det_floor = 1e-8;
  double fd_scale = 1e-6;

  MatrixXd jac_x(const VectorXd& x, const VectorXd& p) const;
  MatrixXd jac_p(const VectorXd& x, const VectorXd& p) const;
};

/// Builds the problem generated by a u-independent mapping. Throws ModelError
/// at evaluation points where det Y_p falls under the floor.
ProblemSpec problem_from_mapping(const GeneratingMap& gm, const Domain& domain, ScalarFn phi);

/// Affine change of coordinates y = M x + b.
struct AffineMap {
  MatrixXd M;
  VectorXd b;

  VectorXd apply(const VectorXd& x) const { return M * x + b; }
  AffineMap inverse() const;
  static AffineMap identity(int dim);
};

/// Transforms (A, B) under the affine diffeomorphism y = Mx + b:
///   A'(y,q) = M^{-T} A(M^{-1}(y-b), M^T q) M^{-1}
///   B'(y,q) = det(M)^{-2} B(M^{-1}(y-b), M^T q)
/// (the curvature correction vanishes for affine maps). Closed-form
/// derivatives transform alongside when present.
std::pair<MatrixFunction, ScalarB> transform_model(const MatrixFunction& A, const ScalarB& B,
                                                   const AffineMap& map);

/// Full-problem transform. The image domain is representable only for
/// axis-aligned rectangle scalings and disc similarities; other affine maps
/// throw (use transform_model for the model-level invariance checks).
ProblemSpec transform_problem(const ProblemSpec& ps, const AffineMap& map);

// ---- built-in matrix-function profiles -------------------------------------

/// A == 0.
MatrixFunction zero_matrix_function(int dim = 2);
/// A == I.
MatrixFunction identity_matrix_function(int dim = 2);
/// A(x,p) = sign * sqrt(1-|p|^2) (I - p p^T), the profile generated by the
/// cost sign*sqrt(1+|x-y|^2); closed-form derivatives included. Requires
/// |p| < 1.
MatrixFunction sqrt_profile_matrix_function(double sign, int dim = 2);
/// A(x,p) = sign * (|p|^2 I - 2 p p^T), generated by the cost sign*log|x-y|.
MatrixFunction log_profile_matrix_function(double sign, int dim = 2);

/// Cost sign*sqrt(1+|x-y|^2) with closed-form derivative blocks.
CostModel sqrt_cost(double sign, const VectorXd& y_lo, const VectorXd& y_hi);
/// Cost |x-y|^2/2 with closed-form derivative blocks.
CostModel quadratic_cost(const VectorXd& y_lo, const VectorXd& y_hi);
/// Cost -x.y (bilinear) with closed-form derivative blocks.
CostModel bilinear_cost(const VectorXd& y_lo, const VectorXd& y_hi);
/// Cost sign*log|x-y| with closed-form derivative blocks.
CostModel log_cost(double sign, const VectorXd& y_lo, const VectorXd& y_hi);

}  // namespace mats
