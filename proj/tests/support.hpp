#pragma once

#include <doctest.h>

#include "mats/config.hpp"
#include "mats/diagnostics.hpp"

namespace mats::testing {

inline VectorXd v2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

inline Domain unit_square() { return Domain::rectangle(Vec2(-0.5, -0.5), Vec2(0.5, 0.5)); }
inline Domain unit_disc() { return Domain::disc(Vec2(0, 0), 1.0); }

/// A = 0, B = 1 problem on the given domain with boundary data phi.
inline ProblemSpec laplace_like(const Domain& d, ScalarFn phi) {
  ProblemSpec ps;
  ps.name = "plain";
  ps.domain = d;
  ps.A = zero_matrix_function(2);
  ps.B.value = [](const VectorXd&, const VectorXd&) { return 1.0; };
  ps.B.grad_p = [](const VectorXd&, const VectorXd&) { return VectorXd::Zero(2); };
  ps.phi = std::move(phi);
  return ps;
}

inline double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace mats::testing
