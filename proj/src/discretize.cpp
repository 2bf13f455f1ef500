#include "mats/discretize.hpp"

#include <cmath>
#include <sstream>

namespace mats {

namespace {

// first and second divided-difference coefficients on a line with arm
// lengths a (plus side) and b (minus side); exact on quadratics
void line_coeffs(double a, double b, double& first_plus, double& first_minus, double& first_self,
                 double& second_plus, double& second_minus, double& second_self) {
  const double s = a + b;
  first_plus = b / (a * s);
  first_minus = -a / (b * s);
  first_self = (a - b) / (a * b);
  second_plus = 2.0 / (a * s);
  second_minus = 2.0 / (b * s);
  second_self = -2.0 / (a * b);
}

}  // namespace

NodeStencils node_stencils(const Grid& g, int interior_ordinal) {
  const auto& arms = g.arms[interior_ordinal];
  NodeStencils st;

  double fp, fm, fs, sp, sm, ss;

  line_coeffs(arms[XPlus].len, arms[XMinus].len, fp, fm, fs, sp, sm, ss);
  st.d1.c[XPlus] = fp;
  st.d1.c[XMinus] = fm;
  st.d1.c0 = fs;
  st.d11.c[XPlus] = sp;
  st.d11.c[XMinus] = sm;
  st.d11.c0 = ss;

  line_coeffs(arms[YPlus].len, arms[YMinus].len, fp, fm, fs, sp, sm, ss);
  st.d2.c[YPlus] = fp;
  st.d2.c[YMinus] = fm;
  st.d2.c0 = fs;
  st.d22.c[YPlus] = sp;
  st.d22.c[YMinus] = sm;
  st.d22.c0 = ss;

  // cross derivative: (d^2/de^2 - d^2/df^2)/2 along the two diagonals
  line_coeffs(arms[DPlusPlus].len, arms[DMinusMinus].len, fp, fm, fs, sp, sm, ss);
  st.d12.c[DPlusPlus] = 0.5 * sp;
  st.d12.c[DMinusMinus] = 0.5 * sm;
  st.d12.c0 = 0.5 * ss;
  line_coeffs(arms[DPlusMinus].len, arms[DMinusPlus].len, fp, fm, fs, sp, sm, ss);
  st.d12.c[DPlusMinus] -= 0.5 * sp;
  st.d12.c[DMinusPlus] -= 0.5 * sm;
  st.d12.c0 -= 0.5 * ss;

  return st;
}

namespace {

double apply_op(const StencilOp& op, const ScalarField& u, const std::array<Arm, 8>& arms,
                double self) {
  double v = op.c0 * self;
  for (int d = 0; d < 8; ++d) {
    if (op.c[d] != 0.0) v += op.c[d] * u.arm_value(arms[d]);
  }
  return v;
}

}  // namespace

std::vector<NodeDerivatives> derivatives(const ScalarField& u) {
  const Grid& g = *u.grid;
  std::vector<NodeDerivatives> out(g.n_interior());
  for (int k = 0; k < g.n_interior(); ++k) {
    const auto st = node_stencils(g, k);
    const auto& arms = g.arms[k];
    const double self = u.values[g.interior_nodes[k]];
    NodeDerivatives d;
    d.grad.x() = apply_op(st.d1, u, arms, self);
    d.grad.y() = apply_op(st.d2, u, arms, self);
    const double h11 = apply_op(st.d11, u, arms, self);
    const double h22 = apply_op(st.d22, u, arms, self);
    const double h12 = apply_op(st.d12, u, arms, self);
    d.hess << h11, h12, h12, h22;
    out[k] = d;
  }
  return out;
}

EllipticIterate assemble_w(const ProblemSpec& ps, ScalarField u) {
  EllipticIterate it;
  it.u = std::move(u);
  it.derivs = derivatives(it.u);
  const Grid& g = *it.u.grid;
  const int ni = g.n_interior();
  it.w.resize(ni);
  it.det_w.resize(ni);
  it.min_eig_w.resize(ni);
  it.elliptic = true;
  it.max_norm_w = 0.0;
  for (int k = 0; k < ni; ++k) {
    const Vec2& x = g.position[g.interior_nodes[k]];
    const MatrixXd a = ps.A.value(VectorXd(x), VectorXd(it.derivs[k].grad));
    Mat2 w = it.derivs[k].hess - Mat2(a);
    w = 0.5 * (w + w.transpose().eval());
    it.w[k] = w;
    it.det_w[k] = w.determinant();
    it.min_eig_w[k] = min_eigenvalue(w);
    it.max_norm_w = std::max(it.max_norm_w, spectral_norm(w));
    if (!(it.min_eig_w[k] > 0.0)) it.elliptic = false;
  }
  return it;
}

VectorXd residual(const ProblemSpec& ps, const EllipticIterate& it, double t,
                  const EllipticIterate* subsol) {
  const Grid& g = *it.u.grid;
  const int ni = g.n_interior();
  if (t < 1.0 && subsol == nullptr)
    throw SolveError("continuation residual with t < 1 needs the subsolution iterate");
  VectorXd r(ni);
  for (int k = 0; k < ni; ++k) {
    if (!(it.det_w[k] > 0.0) || !(it.min_eig_w[k] > 0.0)) {
      const Vec2& x = g.position[g.interior_nodes[k]];
      std::ostringstream os;
      os << "iterate not elliptic at node (" << x.x() << ", " << x.y()
         << "): min eig of w = " << it.min_eig_w[k];
      throw NonEllipticError(os.str());
    }
    const Vec2& x = g.position[g.interior_nodes[k]];
    const double bval = ps.B.value(VectorXd(x), VectorXd(it.derivs[k].grad));
    double rhs = bval;
    if (t < 1.0) rhs = t * bval + (1.0 - t) * subsol->det_w[k];
    if (!(rhs > 0.0)) {
      std::ostringstream os;
      os << "right-hand side not positive at node (" << x.x() << ", " << x.y() << "): " << rhs;
      throw ModelError(os.str());
    }
    r[k] = std::log(it.det_w[k]) - std::log(rhs);
  }
  return r;
}

}  // namespace mats
