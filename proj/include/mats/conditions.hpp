#pragma once

#include "mats/solver.hpp"

namespace mats {

/// Outcome of one hypothesis check: the minimum margin over all samples
/// (non-negative means the hypothesis holds there), the worst witness point,
/// and the pass verdict min_margin >= -tolerance.
struct ConditionReport {
  std::string name;
  long samples = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool pass = true;

  bool has_witness = false;
  Vec2 witness_x{0, 0};
  Vec2 witness_p{0, 0};
  Vec2 witness_xi{0, 0};
  Vec2 witness_eta{0, 0};
  std::string note;

  void observe(double margin, const Vec2& x, const Vec2& p = Vec2::Zero(),
               const Vec2& xi = Vec2::Zero(), const Vec2& eta = Vec2::Zero());
  void finalize();

  static std::string csv_header();
  std::string csv_row() const;
};

/// theta_k = k*pi/n, covering the unit directions up to sign.
std::vector<double> direction_angles(int n);

/// Deterministic sample sets.
std::vector<Vec2> sample_interior(const Domain& d, int count, Rng& rng);
std::vector<Vec2> sample_box(const Vec2& lo, const Vec2& hi, int count, Rng& rng);

/// Regularity of the matrix function: second p-derivative tensor contracted
/// with orthogonal unit pairs (xi, eta) must be >= 0 (the weak form of the
/// Ma-Trudinger-Wang condition). Uses closed-form tensors when the model has
/// them, otherwise fourth-order differences.
ConditionReport check_regularity(const MatrixFunction& mf, const std::vector<Vec2>& xs,
                                 const std::vector<Vec2>& ps, int n_dirs = 64,
                                 double tolerance = 1e-6);

/// Quadratic lower bound A >= -mu0 (1+|p|^2) I: margin is the minimum
/// eigenvalue of A + mu0(1+|p|^2) I.
ConditionReport check_structure(const MatrixFunction& mf, double mu0, const std::vector<Vec2>& xs,
                                const std::vector<Vec2>& ps);

/// Maximum eigenvalue of A(x,0) must be non-negative at every x (constants
/// are then supersolutions and the maximum principle bounds solutions).
ConditionReport check_A0_eigenvalue(const MatrixFunction& mf, const std::vector<Vec2>& xs);

/// Subsolution margins: (a) ellipticity of w = D2u - A(x,Du), (b) the
/// determinant surplus det w - B(x,Du); strict mode reports the largest
/// admissible uniform surplus delta0 and passes only when it is positive.
struct SubsolutionReport {
  ConditionReport report;
  double ellipticity_margin = 0.0;
  double det_margin = 0.0;  // min(det w - B)
  double delta0 = 0.0;      // largest uniform surplus (strict mode)
  bool strict = false;
};

SubsolutionReport check_subsolution(const ProblemSpec& ps, const ScalarField& sub, bool strict,
                                    const std::function<bool(const Vec2&)>& region = {},
                                    double tolerance = 1e-9);

enum class StrictifyMode { X1, BoundaryDistance };

/// field + a*exp(b*x1), or field + a*exp(b*d(x)) in boundary-distance mode.
/// The caller re-checks strictness; a = 0 returns the field unchanged.
ScalarField strictify(const ScalarField& f, double a, double b, StrictifyMode mode);

/// Certificate that phi_b = exp(K(sub - u)) is a barrier for the linearized
/// operator: L phi_b >= eps1 * sum_i F^{ii} - C at every interior node.
/// The fit takes the smallest C >= 0 (zero unless L phi_b dips negative) and
/// then the largest eps1 by bisection; valid means eps1 > 0. A constant
/// phi_b (u == sub, or K = 0) is degenerate: it certifies trivially with the
/// convention eps1 = 1, C = max sum F^{ii}, and K <= 0 is reported as too
/// small.
struct BarrierCertificate {
  double K = 0.0;
  double eps1 = 0.0;
  double C = 0.0;
  VectorXd margins;  // L phi_b - eps1 sum F^{ii} + C per interior node
  bool valid = false;
  bool degenerate = false;
  std::string note;
};

BarrierCertificate check_barrier(const ProblemSpec& ps, const EllipticIterate& u,
                                 const ScalarField& sub, double K);

/// K auto-search over {1, 2, 4, ..., K_max}; returns the first valid
/// certificate, else the best attempt with a failure note.
BarrierCertificate find_barrier(const ProblemSpec& ps, const EllipticIterate& u,
                                const ScalarField& sub, double K_max = 1024.0);

/// Global barrier condition on a candidate function: the matrix
/// D^2 phibar - D_{p_k}A(.,Du) D_k phibar must dominate the identity.
ConditionReport check_A_bounded(const ProblemSpec& ps, const EllipticIterate& u,
                                const ScalarField& phibar);

/// Uniform convexity of the boundary relative to A:
/// [D_i gamma_j + D_{p_k}A_ij gamma_k] tau_i tau_j >= delta0 on the boundary
/// (gradient taken from the nearest interior node).
ConditionReport check_uniform_A_convexity(const ProblemSpec& ps, const EllipticIterate& u,
                                          double delta0, int n_samples = 256);

/// Convexity of the images of the domain boundary under x -> c_y(x, y):
/// normalized cross products of consecutive polygon edges, oriented by the
/// signed area; collinear edges count as convex.
ConditionReport check_domain_c_convexity(const CostModel& cm, const std::vector<Vec2>& boundary,
                                         const std::vector<Vec2>& y_samples,
                                         double tolerance = 1e-9);
ConditionReport check_domain_c_convexity(const CostModel& cm, const Domain& domain,
                                         const std::vector<Vec2>& y_samples,
                                         double tolerance = 1e-9);

/// Cost-convexity of the solution: at each base node x0 with y0 = Y(x0,Du),
/// u(x) - u(x0) - c(x,y0) + c(x0,y0) >= 0 over the grid.
ConditionReport check_solution_c_convexity(const CostModel& cm, const EllipticIterate& u,
                                           int stride = 1, double tolerance = 1e-6);

}  // namespace mats
