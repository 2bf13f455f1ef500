#pragma once

#include "mats/field.hpp"
#include "mats/model.hpp"

namespace mats {

/// Coefficients of one difference operator at a node: value = c0*u(node) +
/// sum_d c[d]*u(arm d). Arms with zero coefficient are skipped in assembly.
struct StencilOp {
  double c0 = 0.0;
  std::array<double, 8> c{};  // indexed by ArmDir
};

/// All derivative stencils of one interior node. Centered second-order
/// differences on full arms; divided differences of the same order on clipped
/// (Shortley-Weller) arms; the cross derivative is the half-difference of the
/// two diagonal second derivatives, which reduces to the standard four-corner
/// stencil on uniform arms and stays exact on quadratics with clipped ones.
struct NodeStencils {
  StencilOp d1, d2, d11, d22, d12;
};

NodeStencils node_stencils(const Grid& g, int interior_ordinal);

struct NodeDerivatives {
  Vec2 grad{0.0, 0.0};
  Mat2 hess = Mat2::Zero();
};

/// Gradient and Hessian per interior node (ordinal order).
std::vector<NodeDerivatives> derivatives(const ScalarField& u);

/// An iterate with its cached derivatives, augmented Hessian
/// w = D2u - A(x,Du), eigenvalue range and ellipticity flag. Non-ellipticity
/// is a state here, not an error.
struct EllipticIterate {
  ScalarField u;
  std::vector<NodeDerivatives> derivs;
  std::vector<Mat2> w;
  VectorXd det_w;
  VectorXd min_eig_w;
  bool elliptic = false;
  double max_norm_w = 0.0;  // max spectral norm over interior nodes
};

EllipticIterate assemble_w(const ProblemSpec& ps, ScalarField u);

/// Node-wise continuation residual over interior nodes:
///   log det w(u)  -  log( t B(x,Du) + (1-t) det w(subsol) )
/// which at t = 1 is log det w - log B. Throws NonEllipticError (naming the
/// node) where det w <= 0, and requires the subsolution iterate for t < 1.
VectorXd residual(const ProblemSpec& ps, const EllipticIterate& it, double t,
                  const EllipticIterate* subsol);

}  // namespace mats
