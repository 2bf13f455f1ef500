#include "mats/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace mats {

PogorelovResult pogorelov_functional(const EllipticIterate& u, const ScalarField& sub, double a,
                                     double b, double K, int n_dirs) {
  if (!u.elliptic) throw NonEllipticError("functional requires an elliptic iterate");
  const Grid& g = *u.u.grid;
  const auto angles = direction_angles(n_dirs);
  PogorelovResult res;
  res.field.resize(g.n_interior());
  res.max_value = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.n_interior(); ++k) {
    const int s = g.interior_nodes[k];
    const double phi_b = std::exp(K * (sub.values[s] - u.u.values[s]));
    const double weight = std::exp(0.5 * a * u.derivs[k].grad.squaredNorm() + b * phi_b);
    double best = -std::numeric_limits<double>::infinity();
    double best_angle = 0.0;
    for (double th : angles) {
      const Vec2 xi(std::cos(th), std::sin(th));
      const double v = weight * (xi.transpose() * u.w[k] * xi).value();
      if (v > best) {
        best = v;
        best_angle = th;
      }
    }
    res.field[k] = best;
    if (best > res.max_value) {
      res.max_value = best;
      res.argmax_ordinal = k;
      res.argmax_angle = best_angle;
    }
  }
  return res;
}

std::string EstimateReport::text() const {
  std::ostringstream os;
  os << "estimate report (boundary suprema taken on the first interior layer)\n"
     << "  sup |D2u| interior           = " << sup_hess_interior << "\n"
     << "  sup |D2u| boundary layer     = " << sup_hess_boundary << "\n"
     << "  C_est = sup/(1+sup_boundary) = " << c_est << "\n"
     << "  min boundary-layer w_tt      = " << min_boundary_w << "\n"
     << "  kappa                        = " << kappa << "\n"
     << "  max e^{ku}|Du| interior      = " << grad_fn_max_interior << "\n"
     << "  max e^{ku}|Du| boundary layer= " << grad_fn_max_boundary << "\n"
     << "  gradient max on layer        = " << (grad_max_on_boundary_layer ? "yes" : "no") << "\n"
     << "  K0 bound / observed |u|      = " << K0_bound << " / " << K0_observed << "\n"
     << "  K1 observed |Du|             = " << K1_observed << "\n";
  return os.str();
}

EstimateReport estimate_report(const ProblemSpec& ps, const EllipticIterate& u,
                               const ScalarField& sub, double mu0) {
  const Grid& g = *u.u.grid;
  EstimateReport rep;
  double sup_i = 0.0, sup_b = 0.0, g_max = 0.0;
  for (int k = 0; k < g.n_interior(); ++k) {
    const double hn = spectral_norm(u.derivs[k].hess);
    sup_i = std::max(sup_i, hn);
    if (g.boundary_adjacent[k]) sup_b = std::max(sup_b, hn);
    g_max = std::max(g_max, u.derivs[k].grad.norm());
  }
  rep.sup_hess_interior = sup_i;
  rep.sup_hess_boundary = sup_b;
  rep.c_est = sup_i / (1.0 + sup_b);
  rep.K1_observed = g_max;
  rep.K0_observed = u.u.values.cwiseAbs().maxCoeff();

  double phi_max = 0.0;
  for (int b : g.boundary_nodes) phi_max = std::max(phi_max, std::abs(ps.phi(g.position[b])));
  rep.K0_bound = std::max(sub.values.cwiseAbs().maxCoeff(), phi_max);

  // kappa: smallest power of two with kappa >= mu0 (1+G^2)/G^2
  const double G = std::max(g_max, 1e-8);
  const double target = mu0 * (1.0 + G * G) / (G * G);
  double kappa = 1.0;
  while (kappa < target && kappa < std::ldexp(1.0, 40)) kappa *= 2.0;
  rep.kappa = kappa;

  double fi = 0.0, fb = 0.0;
  for (int k = 0; k < g.n_interior(); ++k) {
    const int s = g.interior_nodes[k];
    const double v = std::exp(kappa * u.u.values[s]) * u.derivs[k].grad.norm();
    if (g.boundary_adjacent[k])
      fb = std::max(fb, v);
    else
      fi = std::max(fi, v);
  }
  rep.grad_fn_max_interior = fi;
  rep.grad_fn_max_boundary = fb;
  rep.grad_max_on_boundary_layer = (fb >= fi);

  rep.min_boundary_w = boundary_w(ps, u).min_value;
  return rep;
}

BoundaryWResult boundary_w(const ProblemSpec& ps, const EllipticIterate& u) {
  const Grid& g = *u.u.grid;
  BoundaryWResult res;
  std::vector<double> vals;
  res.min_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.n_interior(); ++k) {
    if (!g.boundary_adjacent[k]) continue;
    const Vec2& x = g.position[g.interior_nodes[k]];
    const Vec2 tau = g.domain.tangent(x);
    const double v = (tau.transpose() * u.w[k] * tau).value();
    vals.push_back(v);
    res.min_value = std::min(res.min_value, v);
  }
  res.values = Eigen::Map<VectorXd>(vals.data(), static_cast<int>(vals.size()));
  return res;
}

TransportResidualResult transport_residual(
    const std::function<VectorXd(const VectorXd&, const VectorXd&)>& Y, const EllipticIterate& u,
    const std::function<double(const VectorXd&, const VectorXd&)>& psi) {
  const Grid& g = *u.u.grid;
  const int ni = g.n_interior();

  // mapped positions per interior node
  std::vector<Vec2> T(ni);
  for (int k = 0; k < ni; ++k) {
    const Vec2& x = g.position[g.interior_nodes[k]];
    T[k] = Vec2(Y(VectorXd(x), VectorXd(u.derivs[k].grad)));
  }

  // derivative of component comp of T along axis (0 or 1) at ordinal k,
  // second-order central when both neighbors are interior, else one-sided
  auto ordinal_at = [&](int k, int di, int dj) -> int {
    const int c = g.node_cell[g.interior_nodes[k]];
    const int i = c % (g.nx + 1) + di, j = c / (g.nx + 1) + dj;
    if (g.kind(i, j) != NodeKind::Interior) return -1;
    return g.interior_ordinal_of[g.stored[g.cell_index(i, j)]];
  };
  auto deriv = [&](int k, int axis, int comp) -> double {
    const int di = axis == 0 ? 1 : 0, dj = axis == 0 ? 0 : 1;
    const int plus = ordinal_at(k, di, dj);
    const int minus = ordinal_at(k, -di, -dj);
    const double h = g.h;
    if (plus >= 0 && minus >= 0) return (T[plus][comp] - T[minus][comp]) / (2.0 * h);
    if (plus >= 0) {
      const int plus2 = ordinal_at(k, 2 * di, 2 * dj);
      if (plus2 >= 0)
        return (-3.0 * T[k][comp] + 4.0 * T[plus][comp] - T[plus2][comp]) / (2.0 * h);
      return (T[plus][comp] - T[k][comp]) / h;
    }
    if (minus >= 0) {
      const int minus2 = ordinal_at(k, -2 * di, -2 * dj);
      if (minus2 >= 0)
        return (3.0 * T[k][comp] - 4.0 * T[minus][comp] + T[minus2][comp]) / (2.0 * h);
      return (T[k][comp] - T[minus][comp]) / h;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  TransportResidualResult res;
  res.field.resize(ni);
  res.max_abs = 0.0;
  for (int k = 0; k < ni; ++k) {
    Mat2 DT;
    DT << deriv(k, 0, 0), deriv(k, 1, 0), deriv(k, 0, 1), deriv(k, 1, 1);
    const Vec2& x = g.position[g.interior_nodes[k]];
    double v;
    if (DT.hasNaN()) {
      v = 0.0;  // isolated node: no stencil; skip
    } else {
      v = std::abs(DT.determinant()) - psi(VectorXd(x), VectorXd(u.derivs[k].grad));
    }
    res.field[k] = v;
    res.max_abs = std::max(res.max_abs, std::abs(v));
  }
  return res;
}

std::string StudyResult::csv() const {
  std::string out = "h,error,observed_order\n";
  for (const auto& r : rows) {
    out += format_double(r.h) + "," + format_double(r.error) + "," +
           format_double(r.observed_order) + "\n";
  }
  return out;
}

StudyResult convergence_study(const ProblemSpec& ps, const ScalarFn& subsolution,
                              const ScalarFn& exact, const std::vector<double>& hs,
                              const SolverConfig& cfg) {
  StudyResult out;
  if (hs.size() < 2) throw ConfigError("convergence study needs at least 2 resolutions");
  for (double h : hs) {
    StudyRow row;
    row.h = h;
    try {
      const GridPtr grid = Grid::build(ps.domain, h);
      const ScalarField sub = ScalarField::from_function(grid, subsolution);
      const ContinuationResult r = continuation_solve(ps, sub, cfg);
      if (r.status != SolveStatus::Converged) {
        out.failure = "solve did not converge at h = " + format_double(h) + ": " + r.failure_reason;
        return out;
      }
      double err = 0.0;
      for (int k = 0; k < grid->n_stored(); ++k)
        err = std::max(err, std::abs(r.final.u.values[k] - exact(grid->position[k])));
      row.error = err;
    } catch (const Error& e) {
      out.failure = std::string("study aborted at h = ") + format_double(h) + ": " + e.what();
      return out;
    }
    if (!out.rows.empty())
      row.observed_order = std::log2(out.rows.back().error / std::max(row.error, 1e-300));
    out.rows.push_back(row);
  }
  out.complete = true;
  return out;
}

}  // namespace mats
