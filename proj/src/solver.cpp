#include "mats/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>
#include <vector>

namespace mats {

double ellipticity_floor(const SolverConfig& cfg, const EllipticIterate& it) {
  return cfg.eps_ell_factor * (1.0 + it.max_norm_w);
}

OperatorCoefficients operator_coefficients(const ProblemSpec& ps, const EllipticIterate& it,
                                           double t, const EllipticIterate* subsol, int ordinal) {
  const Grid& g = *it.u.grid;
  const Vec2& x = g.position[g.interior_nodes[ordinal]];
  const Vec2& p = it.derivs[ordinal].grad;
  const Mat2& w = it.w[ordinal];
  const double det = it.det_w[ordinal];

  OperatorCoefficients oc;
  oc.F << w(1, 1), -w(0, 1), -w(0, 1), w(0, 0);
  oc.F /= det;

  const AEval ae = eval_A(ps.A, VectorXd(x), VectorXd(p), 1);
  Vec2 drift = Vec2::Zero();
  for (int k = 0; k < 2; ++k) drift[k] = (oc.F.array() * Mat2(ae.dp[k]).array()).sum();

  // weight of the gradient dependence of the blended right side
  double s = 1.0;
  if (t < 1.0) {
    const double bval = ps.B.value(VectorXd(x), VectorXd(p));
    s = t * bval / (t * bval + (1.0 - t) * subsol->det_w[ordinal]);
  }
  if (s != 0.0) {
    const double bval = ps.B.value(VectorXd(x), VectorXd(p));
    const VectorXd bp = b_grad_p(ps.B, VectorXd(x), VectorXd(p));
    drift += s * Vec2(bp) / bval;  // Btilde_p = B_p / B
  }
  oc.drift = drift;
  return oc;
}

namespace {

// accumulates one stencil operator into a sparse row
void accumulate(std::vector<Eigen::Triplet<double>>& trip, const Grid& g, int row, int self,
                const StencilOp& op, double weight, const std::array<Arm, 8>& arms) {
  if (weight == 0.0) return;
  trip.emplace_back(row, self, weight * op.c0);
  for (int d = 0; d < 8; ++d) {
    if (op.c[d] == 0.0) continue;
    if (arms[d].clipped) continue;  // boundary data: increment vanishes there
    trip.emplace_back(row, arms[d].neighbor, weight * op.c[d]);
  }
}

}  // namespace

LinearizedSystem assemble_linearized(const ProblemSpec& ps, const EllipticIterate& it, double t,
                                     const EllipticIterate* subsol, const SolverConfig& cfg) {
  const Grid& g = *it.u.grid;
  const double floor = ellipticity_floor(cfg, it);
  if (!it.elliptic || it.min_eig_w.minCoeff() < floor) {
    std::ostringstream os;
    os << "linearization requires a strictly elliptic iterate (min eig "
       << (it.min_eig_w.size() ? it.min_eig_w.minCoeff() : 0.0) << " < floor " << floor << ")";
    throw SolveError(os.str());
  }

  const int n = g.n_stored();
  const VectorXd res = residual(ps, it, t, subsol);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(g.n_interior()) * 12 + g.boundary_nodes.size());
  VectorXd rhs = VectorXd::Zero(n);

  for (int k = 0; k < g.n_interior(); ++k) {
    const int row = g.interior_nodes[k];
    const auto st = node_stencils(g, k);
    const auto& arms = g.arms[k];
    const OperatorCoefficients oc = operator_coefficients(ps, it, t, subsol, k);
    accumulate(trip, g, row, row, st.d11, oc.F(0, 0), arms);
    accumulate(trip, g, row, row, st.d22, oc.F(1, 1), arms);
    accumulate(trip, g, row, row, st.d12, 2.0 * oc.F(0, 1), arms);
    accumulate(trip, g, row, row, st.d1, -oc.drift[0], arms);
    accumulate(trip, g, row, row, st.d2, -oc.drift[1], arms);
    rhs[row] = -res[k];
  }
  for (int b : g.boundary_nodes) trip.emplace_back(b, b, 1.0);

  LinearizedSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = std::move(rhs);
  return sys;
}

VectorXd apply_operator(const ProblemSpec& ps, const EllipticIterate& it, const ScalarField& f) {
  const Grid& g = *it.u.grid;
  VectorXd out(g.n_interior());
  for (int k = 0; k < g.n_interior(); ++k) {
    const auto st = node_stencils(g, k);
    const auto& arms = g.arms[k];
    const double self = f.values[g.interior_nodes[k]];
    auto apply = [&](const StencilOp& op) {
      double v = op.c0 * self;
      for (int d = 0; d < 8; ++d)
        if (op.c[d] != 0.0) v += op.c[d] * f.arm_value(arms[d]);
      return v;
    };
    const OperatorCoefficients oc = operator_coefficients(ps, it, 1.0, nullptr, k);
    out[k] = oc.F(0, 0) * apply(st.d11) + oc.F(1, 1) * apply(st.d22) +
             2.0 * oc.F(0, 1) * apply(st.d12) - oc.drift[0] * apply(st.d1) -
             oc.drift[1] * apply(st.d2);
  }
  return out;
}

VectorXd trace_F(const EllipticIterate& it) {
  const int n = static_cast<int>(it.w.size());
  VectorXd s(n);
  for (int k = 0; k < n; ++k) s[k] = (it.w[k](0, 0) + it.w[k](1, 1)) / it.det_w[k];
  return s;
}

NewtonOutcome newton_step(const ProblemSpec& ps, const EllipticIterate& it, double t,
                          const SolverConfig& cfg, const EllipticIterate* subsol) {
  const Grid& g = *it.u.grid;
  const LinearizedSystem sys = assemble_linearized(ps, it, t, subsol, cfg);
  const double res0 = sys.rhs.lpNorm<Eigen::Infinity>();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(sys.matrix);
  lu.factorize(sys.matrix);
  if (lu.info() != Eigen::Success) throw SolveError("sparse factorization failed");
  VectorXd delta = lu.solve(sys.rhs);
  // Dirichlet rows are exact: boundary increments vanish identically
  for (int b : g.boundary_nodes) delta[b] = 0.0;

  for (int m = 0; m <= cfg.max_line_search; ++m) {
    const double alpha = std::ldexp(1.0, -m);
    ScalarField cand = it.u;
    cand.values = it.u.values + alpha * delta;
    EllipticIterate next = assemble_w(ps, cand);
    if (!next.elliptic || next.min_eig_w.minCoeff() < ellipticity_floor(cfg, next)) continue;
    double rn;
    try {
      rn = residual(ps, next, t, subsol).lpNorm<Eigen::Infinity>();
    } catch (const Error&) {
      continue;
    }
    if (rn < res0 || rn <= 1e-13) {
      NewtonOutcome out;
      out.next = std::move(next);
      out.alpha = alpha;
      out.residual_norm = rn;
      out.step_max = alpha * delta.lpNorm<Eigen::Infinity>();
      return out;
    }
  }
  throw SolveError("line search failed: no step keeps the iterate elliptic and decreases the residual");
}

namespace {

void trace_line(std::string& trace, double t, int iter, double res, double min_eig, double alpha) {
  trace += format_double(t) + "," + std::to_string(iter) + "," + format_double(res) + "," +
           format_double(min_eig) + "," + format_double(alpha) + "\n";
}

}  // namespace

ContinuationResult continuation_solve(const ProblemSpec& ps, const ScalarField& subsolution,
                                      const SolverConfig& cfg, const StepObserver& observer) {
  const GridPtr grid = subsolution.grid;
  const Grid& g = *grid;
  if (!ps.phi) throw SolveError("problem has no boundary data");

  const EllipticIterate sub_it = assemble_w(ps, subsolution);
  if (!sub_it.elliptic)
    throw SolveError("subsolution iterate is not elliptic; run the subsolution check first");

  const ScalarFn phi = ps.phi;
  const ScalarFn sub_fn = subsolution.boundary_fn;
  auto blended_boundary = [&](double t) -> ScalarFn {
    if (!sub_fn) return phi;  // rectangle grids never evaluate it off-node
    return [t, phi, sub_fn](const Vec2& x) { return t * phi(x) + (1.0 - t) * sub_fn(x); };
  };
  auto impose_boundary = [&](ScalarField& f, double t) {
    for (int b : g.boundary_nodes) {
      const Vec2& x = g.position[b];
      f.values[b] = t * phi(x) + (1.0 - t) * subsolution.values[b];
    }
    f.boundary_fn = blended_boundary(t);
  };

  ContinuationResult result;
  result.final = sub_it;

  // t = 0: the subsolution solves the blended problem exactly
  {
    const double r0 = residual(ps, result.final, 0.0, &sub_it).lpNorm<Eigen::Infinity>();
    StepRecord rec;
    rec.t = 0.0;
    rec.residual_norm = r0;
    rec.min_eig = result.final.min_eig_w.minCoeff();
    rec.residual_history.push_back(r0);
    result.steps.push_back(rec);
    result.min_eig_over_run = rec.min_eig;
    trace_line(result.trace, 0.0, 0, r0, rec.min_eig, 1.0);
    if (observer) observer(0.0, result.final);
  }

  double t = 0.0;
  double dt = std::min(cfg.t_init, 1.0);
  std::string last_failure;
  bool ellipticity_failure = false;

  while (t < 1.0) {
    const double tn = std::min(1.0, t + dt);
    bool ok = true;
    std::string why;
    StepRecord rec;
    rec.t = tn;

    ScalarField start = result.final.u;
    impose_boundary(start, tn);
    EllipticIterate current;
    try {
      current = assemble_w(ps, start);
      double rn = residual(ps, current, tn, &sub_it).lpNorm<Eigen::Infinity>();
      rec.residual_history.push_back(rn);
      double min_eig_step = current.min_eig_w.minCoeff();
      double alpha = 1.0;
      int iter = 0;
      while (rn > cfg.tol) {
        if (iter >= cfg.max_newton) {
          ok = false;
          why = "newton did not converge within the iteration budget";
          break;
        }
        NewtonOutcome out = newton_step(ps, current, tn, cfg, &sub_it);
        ++iter;
        current = std::move(out.next);
        rn = out.residual_norm;
        alpha = out.alpha;
        min_eig_step = std::min(min_eig_step, current.min_eig_w.minCoeff());
        rec.residual_history.push_back(rn);
        trace_line(result.trace, tn, iter, rn, current.min_eig_w.minCoeff(), alpha);
      }
      if (ok) {
        rec.newton_iterations = iter;
        rec.residual_norm = rn;
        rec.min_eig = current.min_eig_w.minCoeff();
        rec.alpha = alpha;
        result.min_eig_over_run = std::min(result.min_eig_over_run, min_eig_step);
        if (iter == 0) trace_line(result.trace, tn, 0, rn, rec.min_eig, 1.0);
      }
    } catch (const NonEllipticError& e) {
      ok = false;
      why = e.what();
      ellipticity_failure = true;
    } catch (const Error& e) {
      ok = false;
      why = e.what();
      if (std::string(e.what()).find("elliptic") != std::string::npos) ellipticity_failure = true;
    }

    if (ok) {
      result.steps.push_back(rec);
      result.final = std::move(current);
      t = tn;
      if (observer) observer(t, result.final);
      if (rec.newton_iterations <= 3 && t < 1.0) dt = std::min(2.0 * dt, 1.0 - t);
      dt = std::min(dt, 1.0 - t > 0 ? 1.0 - t : dt);
    } else {
      last_failure = why;
      dt *= 0.5;
      if (dt < cfg.t_min) {
        result.status = ellipticity_failure ? SolveStatus::EllipticityLost : SolveStatus::Stalled;
        result.failure_reason = "continuation step underflow at t = " + format_double(t) +
                                (last_failure.empty() ? "" : ": " + last_failure);
        return result;
      }
    }
  }

  result.status = SolveStatus::Converged;
  return result;
}

ComparisonReport comparison_check(const ScalarField& u, const ScalarField& subsolution) {
  ComparisonReport rep;
  rep.min_difference = (u.values - subsolution.values).minCoeff();
  rep.pass = rep.min_difference >= -1e-8;
  return rep;
}

}  // namespace mats
