#pragma once

#include "mats/conditions.hpp"

namespace mats {

struct PogorelovResult {
  VectorXd field;        // per interior ordinal: max over directions
  double max_value = 0.0;
  int argmax_ordinal = -1;
  double argmax_angle = 0.0;
};

/// Weighted tangential-Hessian functional exp(a/2 |Du|^2 + b phi_b) w_xixi
/// maximized over 64 directions per node, phi_b = exp(K(sub - u)). Its
/// global maximum is the quantity the interior second-derivative estimates
/// control; we monitor boundedness across resolutions.
PogorelovResult pogorelov_functional(const EllipticIterate& u, const ScalarField& sub, double a,
                                     double b, double K, int n_dirs = 64);

/// Monitored estimate quantities for one iterate. Boundary suprema are
/// approximated on the first interior layer (stated in reports); kappa is the
/// smallest power of two making e^{kappa u}|Du| admissible for the gradient
/// bound with the observed gradient range.
struct EstimateReport {
  double sup_hess_interior = 0.0;   // max spectral norm of D2u, interior nodes
  double sup_hess_boundary = 0.0;   // same, boundary-adjacent nodes only
  double c_est = 0.0;               // sup_interior / (1 + sup_boundary)
  double min_boundary_w = 0.0;      // min tangential w on the boundary layer
  double kappa = 1.0;
  double grad_fn_max_interior = 0.0;  // max of e^{kappa u}|Du|, deep interior
  double grad_fn_max_boundary = 0.0;  // same, boundary-adjacent layer
  bool grad_max_on_boundary_layer = false;
  double K0_bound = 0.0;     // max(|sub|_inf, |phi|_inf)
  double K0_observed = 0.0;  // |u|_inf
  double K1_observed = 0.0;  // |Du|_inf
  std::string text() const;
};

EstimateReport estimate_report(const ProblemSpec& ps, const EllipticIterate& u,
                               const ScalarField& sub, double mu0);

struct BoundaryWResult {
  VectorXd values;  // per boundary-adjacent interior node
  double min_value = 0.0;
};

/// Tangential component w_tt = (D2u - A)(tau,tau) on the boundary-adjacent
/// layer; its positivity is the quantity the boundary estimates bound below.
BoundaryWResult boundary_w(const ProblemSpec& ps, const EllipticIterate& u);

struct TransportResidualResult {
  VectorXd field;  // per interior ordinal (one-sided stencils at the layer)
  double max_abs = 0.0;
};

/// |det DT| - psi(x,Du) for T = Y(.,Du), with DT from second-order
/// differences of the mapped node positions (one-sided at the boundary
/// layer).
TransportResidualResult transport_residual(
    const std::function<VectorXd(const VectorXd&, const VectorXd&)>& Y, const EllipticIterate& u,
    const std::function<double(const VectorXd&, const VectorXd&)>& psi);

struct StudyRow {
  double h = 0.0;
  double error = 0.0;
  double observed_order = 0.0;  // vs the previous row; 0 for the first
};

struct StudyResult {
  std::vector<StudyRow> rows;
  bool complete = false;
  std::string failure;
  std::string csv() const;
};

/// Solves the problem on each spacing and reports max-norm errors against the
/// manufactured solution with observed orders; aborts on a failed solve,
/// returning the partial table.
StudyResult convergence_study(const ProblemSpec& ps, const ScalarFn& subsolution,
                              const ScalarFn& exact, const std::vector<double>& hs,
                              const SolverConfig& cfg);

}  // namespace mats
