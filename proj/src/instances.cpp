#include "mats/instances.hpp"

#include <cmath>

namespace mats {

namespace {

VectorXd vec2d(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

GoldenInstance golden_instance(const std::string& name) {
  GoldenInstance gi;
  if (name == "ma-exp") {
    gi.problem.name = name;
    gi.problem.domain = Domain::rectangle(Vec2(-0.5, -0.5), Vec2(0.5, 0.5));
    gi.problem.A = zero_matrix_function(2);
    gi.problem.B.value = [](const VectorXd& x, const VectorXd&) {
      const double r2 = x.squaredNorm();
      return (1.0 + r2) * std::exp(r2);
    };
    gi.problem.B.grad_p = [](const VectorXd&, const VectorXd&) { return VectorXd::Zero(2); };
    gi.exact = [](const Vec2& x) { return std::exp(0.5 * x.squaredNorm()); };
    gi.problem.phi = gi.exact;
    gi.problem.subsolution = [](const Vec2& x) { return x.squaredNorm(); };
    return gi;
  }
  if (name == "ot-quadratic") {
    gi.problem.name = name;
    gi.problem.domain = Domain::rectangle(Vec2(-0.5, -0.5), Vec2(0.5, 0.5));
    gi.problem.A = identity_matrix_function(2);
    gi.problem.B.value = [](const VectorXd&, const VectorXd&) { return 1.0; };
    gi.problem.B.grad_p = [](const VectorXd&, const VectorXd&) { return VectorXd::Zero(2); };
    gi.exact = [](const Vec2& x) { return x.squaredNorm(); };
    gi.problem.phi = gi.exact;
    gi.problem.subsolution = gi.exact;  // exact solution doubles as the subsolution
    gi.cost = quadratic_cost(vec2d(-3, -3), vec2d(3, 3));
    gi.psi = [](const VectorXd&, const VectorXd&) { return 1.0; };
    return gi;
  }
  if (name == "ot-sqrt") {
    gi.problem.name = name;
    gi.problem.domain = Domain::rectangle(Vec2(-0.5, -0.5), Vec2(0.5, 0.5));
    const MatrixFunction prof = sqrt_profile_matrix_function(-1.0, 2);
    gi.problem.A = prof;
    // manufactured from the exact solution 0.3|x|^2: D2u* = 0.6 I, so
    // B(p) = det(0.6 I - A(p)) makes u* solve the equation exactly
    gi.problem.B.value = [prof](const VectorXd& x, const VectorXd& p) {
      const MatrixXd a = prof.value(x, p);
      return (0.6 * MatrixXd::Identity(2, 2) - a).determinant();
    };
    gi.exact = [](const Vec2& x) { return 0.3 * x.squaredNorm(); };
    gi.problem.phi = gi.exact;
    gi.problem.subsolution = [](const Vec2& x) { return 0.45 * x.squaredNorm() - 0.075; };
    gi.cost = sqrt_cost(-1.0, vec2d(-3, -3), vec2d(3, 3));
    // psi(x,p) = B(p) / |det D2_xy c| with |det D2_xy c| = (1-|p|^2)^2
    auto bval = gi.problem.B.value;
    gi.psi = [bval](const VectorXd& x, const VectorXd& p) {
      const double g2 = 1.0 - p.squaredNorm();
      return bval(x, p) / (g2 * g2);
    };
    return gi;
  }
  throw ConfigError("unknown golden instance: " + name);
}

MatrixFunction builtin_matrix_function(const std::string& model) {
  if (model == "zero") return zero_matrix_function(2);
  if (model == "const-I") return identity_matrix_function(2);
  if (model == "quadratic-cost") return identity_matrix_function(2);
  if (model == "sqrt-cost") return sqrt_profile_matrix_function(-1.0, 2);
  if (model == "log-cost") return log_profile_matrix_function(1.0, 2);
  throw ConfigError("unknown model: " + model);
}

std::optional<CostModel> builtin_cost(const std::string& model) {
  if (model == "quadratic-cost") return quadratic_cost(vec2d(-4, -4), vec2d(4, 4));
  if (model == "sqrt-cost") return sqrt_cost(-1.0, vec2d(-4, -4), vec2d(4, 4));
  if (model == "log-cost") return log_cost(1.0, vec2d(-16, -16), vec2d(16, 16));
  return std::nullopt;
}

}  // namespace mats
