#pragma once

#include <optional>

#include "mats/model.hpp"

namespace mats {

/// A fully specified benchmark instance: the problem, its manufactured exact
/// solution when one exists, and the generating cost/density when the
/// instance is a transport problem.
struct GoldenInstance {
  ProblemSpec problem;
  ScalarFn exact;  // empty when no closed-form solution is known
  std::optional<CostModel> cost;
  std::function<double(const VectorXd&, const VectorXd&)> psi;  // transport density
};

/// Built-in instances:
///   "ma-exp"      : A = 0 on the centered unit square, exact solution
///                   exp(|x|^2/2), B = (1+|x|^2) exp(|x|^2), subsolution |x|^2.
///   "ot-quadratic": quadratic cost, A = I, B = 1, exact solution |x|^2
///                   (also its own subsolution).
///   "ot-sqrt"     : cost -sqrt(1+|x-y|^2) (the regular branch), exact
///                   solution 0.3|x|^2, manufactured B from the augmented
///                   Hessian of the exact solution.
GoldenInstance golden_instance(const std::string& name);

/// Matrix function registered under a model name ("zero", "const-I",
/// "quadratic-cost", "sqrt-cost", "log-cost"); costs where applicable.
MatrixFunction builtin_matrix_function(const std::string& model);
std::optional<CostModel> builtin_cost(const std::string& model);

}  // namespace mats
