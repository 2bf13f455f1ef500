#include "mats/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mats {

void ConditionReport::observe(double margin, const Vec2& x, const Vec2& p, const Vec2& xi,
                              const Vec2& eta) {
  ++samples;
  if (margin < min_margin) {
    min_margin = margin;
    witness_x = x;
    witness_p = p;
    witness_xi = xi;
    witness_eta = eta;
    has_witness = true;
  }
}

void ConditionReport::finalize() { pass = (min_margin >= -tolerance); }

std::string ConditionReport::csv_header() {
  return "name,samples,min_margin,tolerance,witness,pass";
}

std::string ConditionReport::csv_row() const {
  std::ostringstream os;
  os << name << "," << samples << "," << format_double(min_margin) << ","
     << format_double(tolerance) << ",";
  if (has_witness) {
    os << format_double(witness_x.x()) << ";" << format_double(witness_x.y()) << ";"
       << format_double(witness_p.x()) << ";" << format_double(witness_p.y()) << ";"
       << format_double(witness_xi.x()) << ";" << format_double(witness_xi.y()) << ";"
       << format_double(witness_eta.x()) << ";" << format_double(witness_eta.y());
  }
  os << "," << (pass ? 1 : 0);
  return os.str();
}

std::vector<double> direction_angles(int n) {
  std::vector<double> th(n);
  for (int k = 0; k < n; ++k) th[k] = M_PI * k / n;
  return th;
}

std::vector<Vec2> sample_interior(const Domain& d, int count, Rng& rng) {
  Vec2 lo, hi;
  d.bounding_box(lo, hi);
  std::vector<Vec2> pts;
  pts.reserve(count);
  int guard = 0;
  while (static_cast<int>(pts.size()) < count && guard < 100000 + 100 * count) {
    ++guard;
    const Vec2 x = rng.in_box(lo, hi);
    if (d.signed_distance(x) > 0.0) pts.push_back(x);
  }
  if (static_cast<int>(pts.size()) < count)
    throw Error("interior sampling failed; degenerate domain?");
  return pts;
}

std::vector<Vec2> sample_box(const Vec2& lo, const Vec2& hi, int count, Rng& rng) {
  std::vector<Vec2> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) pts.push_back(rng.in_box(lo, hi));
  return pts;
}

ConditionReport check_regularity(const MatrixFunction& mf, const std::vector<Vec2>& xs,
                                 const std::vector<Vec2>& ps, int n_dirs, double tolerance) {
  ConditionReport rep;
  rep.name = "regularity";
  rep.tolerance = tolerance;
  const auto angles = direction_angles(n_dirs);
  const int n = mf.dim;
  for (const Vec2& x : xs) {
    for (const Vec2& p : ps) {
      const std::vector<MatrixXd> tensor = mf.has_hess()
                                               ? mf.hess_p(VectorXd(x), VectorXd(p))
                                               : hess_p_fd4(mf, VectorXd(x), VectorXd(p));
      for (double th : angles) {
        const Vec2 xi(std::cos(th), std::sin(th));
        const Vec2 eta(-std::sin(th), std::cos(th));
        double v = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            v += eta[k] * eta[l] * (xi.transpose() * Mat2(tensor[k * n + l]) * xi).value();
        rep.observe(v, x, p, xi, eta);
      }
    }
  }
  rep.finalize();
  return rep;
}

ConditionReport check_structure(const MatrixFunction& mf, double mu0, const std::vector<Vec2>& xs,
                                const std::vector<Vec2>& ps) {
  ConditionReport rep;
  rep.name = "structure";
  for (const Vec2& x : xs) {
    for (const Vec2& p : ps) {
      const Mat2 a = Mat2(mf.value(VectorXd(x), VectorXd(p)));
      const Mat2 m = a + mu0 * (1.0 + p.squaredNorm()) * Mat2::Identity();
      rep.observe(min_eigenvalue(m), x, p);
    }
  }
  rep.finalize();
  return rep;
}

ConditionReport check_A0_eigenvalue(const MatrixFunction& mf, const std::vector<Vec2>& xs) {
  ConditionReport rep;
  rep.name = "a0-eigenvalue";
  for (const Vec2& x : xs) {
    const Mat2 a = Mat2(mf.value(VectorXd(x), VectorXd(Vec2::Zero())));
    rep.observe(max_eigenvalue(a), x);
  }
  rep.finalize();
  return rep;
}

SubsolutionReport check_subsolution(const ProblemSpec& ps, const ScalarField& sub, bool strict,
                                    const std::function<bool(const Vec2&)>& region,
                                    double tolerance) {
  SubsolutionReport out;
  out.strict = strict;
  out.report.name = strict ? "subsolution-strict" : "subsolution";
  out.report.tolerance = tolerance;

  const EllipticIterate it = assemble_w(ps, sub);
  const Grid& g = *sub.grid;
  double ell = std::numeric_limits<double>::infinity();
  double det_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.n_interior(); ++k) {
    const Vec2& x = g.position[g.interior_nodes[k]];
    if (region && !region(x)) continue;
    const double bval = ps.B.value(VectorXd(x), VectorXd(it.derivs[k].grad));
    const double dm = it.det_w[k] - bval;
    ell = std::min(ell, it.min_eig_w[k]);
    det_margin = std::min(det_margin, dm);
    out.report.observe(std::min(it.min_eig_w[k], dm), x, it.derivs[k].grad);
  }
  out.ellipticity_margin = ell;
  out.det_margin = det_margin;
  out.delta0 = std::max(0.0, det_margin);
  if (strict) {
    // pass requires a positive uniform surplus on top of ellipticity
    out.report.min_margin = std::min(ell, det_margin);
    out.report.pass = (ell > 0.0) && (det_margin > tolerance);
    std::ostringstream os;
    os << "largest admissible delta0 = " << out.delta0;
    out.report.note = os.str();
  } else {
    out.report.finalize();
    out.report.pass = out.report.pass && ell > 0.0;
  }
  if (!(ell > 0.0)) out.report.note += (out.report.note.empty() ? "" : "; ") + std::string("not elliptic");
  return out;
}

ScalarField strictify(const ScalarField& f, double a, double b, StrictifyMode mode) {
  if (a == 0.0) return f;
  ScalarField out = f;
  const Grid& g = *f.grid;
  const Domain dom = g.domain;
  auto bump = [mode, a, b, dom](const Vec2& x) {
    return (mode == StrictifyMode::X1) ? a * std::exp(b * x.x())
                                       : a * std::exp(b * dom.signed_distance(x));
  };
  for (int k = 0; k < g.n_stored(); ++k) out.values[k] += bump(g.position[k]);
  if (f.boundary_fn) {
    const ScalarFn base = f.boundary_fn;
    out.boundary_fn = [base, bump](const Vec2& x) { return base(x) + bump(x); };
  }
  return out;
}

BarrierCertificate check_barrier(const ProblemSpec& ps, const EllipticIterate& u,
                                 const ScalarField& sub, double K) {
  if (!u.elliptic) throw NonEllipticError("barrier check requires an elliptic iterate");
  const Grid& g = *u.u.grid;
  BarrierCertificate cert;
  cert.K = K;

  // phi_b = exp(K (sub - u)) as a field, boundary values included
  ScalarField phi_b = ScalarField::zeros(u.u.grid);
  for (int k = 0; k < g.n_stored(); ++k)
    phi_b.values[k] = std::exp(K * (sub.values[k] - u.u.values[k]));
  if (sub.boundary_fn && u.u.boundary_fn) {
    const ScalarFn sf = sub.boundary_fn, uf = u.u.boundary_fn;
    phi_b.boundary_fn = [K, sf, uf](const Vec2& x) { return std::exp(K * (sf(x) - uf(x))); };
  }

  const VectorXd Lphi = apply_operator(ps, u, phi_b);
  const VectorXd S = trace_F(u);

  const double spread = phi_b.values.maxCoeff() - phi_b.values.minCoeff();
  const bool constant = spread <= 1e-14 * std::max(1.0, phi_b.values.cwiseAbs().maxCoeff());
  if (constant) {
    cert.degenerate = true;
    if (K <= 0.0) {
      cert.valid = false;
      cert.note = "K too small: barrier degenerates to a constant";
      cert.eps1 = 0.0;
      cert.C = 0.0;
      cert.margins = -S;  // 0 >= eps1*S - C fails for any eps1 > 0 with C = 0
      return cert;
    }
    // u coincides with the subsolution: certifies with any eps1; record the
    // convention eps1 = 1, C = max sum F^{ii}
    cert.valid = true;
    cert.eps1 = 1.0;
    cert.C = S.maxCoeff();
    cert.margins = Lphi - cert.eps1 * S + VectorXd::Constant(S.size(), cert.C);
    cert.note = "degenerate barrier (constant phi); certificate holds trivially";
    return cert;
  }

  // smallest admissible C, then the largest eps1 with
  // max_nodes(eps1*S - Lphi) <= C, located by bisection
  cert.C = std::max(0.0, -Lphi.minCoeff());
  auto violation = [&](double eps1) { return (eps1 * S - Lphi).maxCoeff() - cert.C; };
  double lo = 0.0, hi = 1.0;
  while (violation(hi) <= 0.0 && hi < 1e12) hi *= 2.0;
  if (violation(hi) <= 0.0) {
    lo = hi;
  } else {
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (violation(mid) <= 0.0 ? lo : hi) = mid;
    }
  }
  cert.eps1 = lo;
  cert.valid = cert.eps1 > 0.0 && cert.C == 0.0;
  cert.margins = Lphi - cert.eps1 * S + VectorXd::Constant(S.size(), cert.C);
  if (!cert.valid) {
    std::ostringstream os;
    os << "no positive eps1 with vanishing C at K = " << K << " (min L phi = " << Lphi.minCoeff()
       << ")";
    cert.note = os.str();
  }
  return cert;
}

BarrierCertificate find_barrier(const ProblemSpec& ps, const EllipticIterate& u,
                                const ScalarField& sub, double K_max) {
  BarrierCertificate best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (double K = 1.0; K <= K_max; K *= 2.0) {
    BarrierCertificate cert = check_barrier(ps, u, sub, K);
    if (cert.valid) return cert;
    const double m = cert.margins.size() ? cert.margins.minCoeff() : -1.0;
    if (m > best_min) {
      best_min = m;
      best = cert;
    }
  }
  best.note = "no valid certificate up to K = " + format_double(K_max) +
              (best.note.empty() ? "" : "; best attempt: " + best.note);
  return best;
}

ConditionReport check_A_bounded(const ProblemSpec& ps, const EllipticIterate& u,
                                const ScalarField& phibar) {
  ConditionReport rep;
  rep.name = "a-bounded";
  const Grid& g = *u.u.grid;
  const auto dphi = derivatives(phibar);
  for (int k = 0; k < g.n_interior(); ++k) {
    const Vec2& x = g.position[g.interior_nodes[k]];
    const Vec2& p = u.derivs[k].grad;
    const AEval ae = eval_A(ps.A, VectorXd(x), VectorXd(p), 1);
    Mat2 m = dphi[k].hess;
    for (int j = 0; j < 2; ++j) m -= Mat2(ae.dp[j]) * dphi[k].grad[j];
    m = 0.5 * (m + m.transpose().eval());
    rep.observe(min_eigenvalue(m) - 1.0, x, p);
  }
  rep.finalize();
  return rep;
}

ConditionReport check_uniform_A_convexity(const ProblemSpec& ps, const EllipticIterate& u,
                                          double delta0, int n_samples) {
  ConditionReport rep;
  rep.name = "uniform-a-convexity";
  const Grid& g = *u.u.grid;
  const Domain& dom = g.domain;
  const auto pts = dom.boundary_samples(n_samples);

  // gradient proxy at a boundary point: nearest interior node
  auto nearest_grad = [&](const Vec2& xb) -> Vec2 {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int k = 0; k < g.n_interior(); ++k) {
      const double d = (g.position[g.interior_nodes[k]] - xb).squaredNorm();
      if (d < best) {
        best = d;
        arg = k;
      }
    }
    return u.derivs[arg].grad;
  };

  for (const Vec2& xb : pts) {
    const Vec2 gamma = dom.outward_normal(xb);
    const Vec2 tau = dom.tangent(xb);
    // D_i gamma_j tau_i tau_j: curvature (1/R for the disc, 0 on flat faces)
    const double curv = (dom.kind == Domain::Kind::Disc) ? 1.0 / dom.radius : 0.0;
    const Vec2 p = nearest_grad(xb);
    const AEval ae = eval_A(ps.A, VectorXd(xb), VectorXd(p), 1);
    double v = curv;
    for (int k = 0; k < 2; ++k)
      v += gamma[k] * (tau.transpose() * Mat2(ae.dp[k]) * tau).value();
    rep.observe(v - delta0, xb, p, tau, gamma);
  }
  rep.finalize();
  return rep;
}

namespace {

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

}  // namespace

ConditionReport check_domain_c_convexity(const CostModel& cm, const std::vector<Vec2>& boundary,
                                         const std::vector<Vec2>& y_samples, double tolerance) {
  ConditionReport rep;
  rep.name = "domain-c-convexity";
  rep.tolerance = tolerance;
  const size_t n = boundary.size();
  if (n < 3) throw Error("domain convexity check needs a boundary polygon");
  std::vector<Vec2> image(n);
  for (const Vec2& y : y_samples) {
    for (size_t i = 0; i < n; ++i)
      image[i] = Vec2(cm.cy(VectorXd(boundary[i]), VectorXd(y)));
    const double orient = polygon_signed_area(image) >= 0.0 ? 1.0 : -1.0;
    for (size_t i = 0; i < n; ++i) {
      const Vec2& a = image[i];
      const Vec2& b = image[(i + 1) % n];
      const Vec2& c = image[(i + 2) % n];
      const Vec2 e1 = b - a, e2 = c - b;
      const double norm = e1.norm() * e2.norm();
      if (norm == 0.0) continue;  // duplicate point
      const double cross = (e1.x() * e2.y() - e1.y() * e2.x()) / norm;
      rep.observe(orient * cross, boundary[(i + 1) % n], y);
    }
  }
  rep.finalize();
  return rep;
}

ConditionReport check_domain_c_convexity(const CostModel& cm, const Domain& domain,
                                         const std::vector<Vec2>& y_samples, double tolerance) {
  return check_domain_c_convexity(cm, domain.boundary_polygon(128), y_samples, tolerance);
}

ConditionReport check_solution_c_convexity(const CostModel& cm, const EllipticIterate& u,
                                           int stride, double tolerance) {
  ConditionReport rep;
  rep.name = "solution-c-convexity";
  rep.tolerance = tolerance;
  const Grid& g = *u.u.grid;
  const int ni = g.n_interior();
  // support-function test against every stored node
  for (int k = 0; k < ni; k += stride) {
    const int s0 = g.interior_nodes[k];
    const Vec2& x0 = g.position[s0];
    const double u0 = u.u.values[s0];
    VectorXd y0;
    try {
      y0 = solve_Y(cm, VectorXd(x0), VectorXd(u.derivs[k].grad));
    } catch (const ModelError& e) {
      rep.note = e.what();
      rep.observe(-std::numeric_limits<double>::infinity(), x0, u.derivs[k].grad);
      continue;
    }
    const double c0 = cm.c(VectorXd(x0), y0);
    double local = std::numeric_limits<double>::infinity();
    Vec2 worst = x0;
    for (int s = 0; s < g.n_stored(); ++s) {
      const Vec2& x = g.position[s];
      const double v = u.u.values[s] - u0 - cm.c(VectorXd(x), y0) + c0;
      if (v < local) {
        local = v;
        worst = x;
      }
    }
    rep.observe(local, x0, u.derivs[k].grad);
  }
  rep.finalize();
  return rep;
}

}  // namespace mats
