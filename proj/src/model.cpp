#include "mats/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <sstream>

namespace mats {

namespace {

std::string point_str(const VectorXd& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

double fd_step(double scale, const VectorXd& p) { return scale * (1.0 + p.norm()); }

}  // namespace

// ---- MatrixFunction ---------------------------------------------------------

std::vector<MatrixXd> grad_p_fd(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p) {
  const int n = mf.dim;
  const double h = fd_step(mf.fd_scale, p);
  std::vector<MatrixXd> out(n);
  for (int k = 0; k < n; ++k) {
    VectorXd e = VectorXd::Zero(n);
    e[k] = h;
    out[k] = (mf.value(x, p + e) - mf.value(x, p - e)) / (2.0 * h);
  }
  return out;
}

std::vector<MatrixXd> hess_p_fd(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p) {
  const int n = mf.dim;
  const double h = fd_step(mf.fd_scale, p);
  std::vector<MatrixXd> out(n * n);
  const MatrixXd A0 = mf.value(x, p);
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      VectorXd ek = VectorXd::Zero(n), el = VectorXd::Zero(n);
      ek[k] = h;
      el[l] = h;
      MatrixXd d;
      if (k == l) {
        d = (mf.value(x, p + ek) - 2.0 * A0 + mf.value(x, p - ek)) / (h * h);
      } else {
        d = (mf.value(x, p + ek + el) - mf.value(x, p + ek - el) - mf.value(x, p - ek + el) +
             mf.value(x, p - ek - el)) /
            (4.0 * h * h);
      }
      out[k * n + l] = d;
      out[l * n + k] = d;
    }
  }
  return out;
}

std::vector<MatrixXd> hess_p_fd4(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p) {
  const int n = mf.dim;
  const double h = fd_step(mf.fd_scale, p);
  auto at = [&](const VectorXd& q) { return mf.value(x, q); };
  // fourth-order first derivative along e, evaluated at q
  auto d1 = [&](const VectorXd& q, const VectorXd& e) -> MatrixXd {
    return (at(q - 2.0 * e) - 8.0 * at(q - e) + 8.0 * at(q + e) - at(q + 2.0 * e)) / (12.0 * h);
  };
  std::vector<MatrixXd> out(n * n);
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      VectorXd ek = VectorXd::Zero(n), el = VectorXd::Zero(n);
      ek[k] = h;
      el[l] = h;
      MatrixXd d;
      if (k == l) {
        d = (-at(p - 2.0 * ek) + 16.0 * at(p - ek) - 30.0 * at(p) + 16.0 * at(p + ek) -
             at(p + 2.0 * ek)) /
            (12.0 * h * h);
      } else {
        // composition of two fourth-order first derivatives
        d = (d1(p - 2.0 * el, ek) - 8.0 * d1(p - el, ek) + 8.0 * d1(p + el, ek) -
             d1(p + 2.0 * el, ek)) /
            (12.0 * h);
      }
      out[k * n + l] = d;
      out[l * n + k] = d;
    }
  }
  return out;
}

AEval eval_A(const MatrixFunction& mf, const VectorXd& x, const VectorXd& p, int order) {
  AEval e;
  e.A = mf.value(x, p);
  if (order >= 1) e.dp = mf.has_grad() ? mf.grad_p(x, p) : grad_p_fd(mf, x, p);
  if (order >= 2) e.dpp = mf.has_hess() ? mf.hess_p(x, p) : hess_p_fd(mf, x, p);
  return e;
}

VectorXd b_grad_p(const ScalarB& b, const VectorXd& x, const VectorXd& p) {
  if (b.grad_p) return b.grad_p(x, p);
  const int n = static_cast<int>(p.size());
  const double h = fd_step(b.fd_scale, p);
  VectorXd g(n);
  for (int k = 0; k < n; ++k) {
    VectorXd e = VectorXd::Zero(n);
    e[k] = h;
    g[k] = (b.value(x, p + e) - b.value(x, p - e)) / (2.0 * h);
  }
  return g;
}

// ---- CostModel ---------------------------------------------------------------

VectorXd CostModel::cx(const VectorXd& x, const VectorXd& y) const {
  if (grad_x) return grad_x(x, y);
  const int n = dim;
  const double h = fd_step(fd_scale, x);
  VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    VectorXd e = VectorXd::Zero(n);
    e[i] = h;
    g[i] = (c(x + e, y) - c(x - e, y)) / (2.0 * h);
  }
  return g;
}

VectorXd CostModel::cy(const VectorXd& x, const VectorXd& y) const {
  if (grad_y) return grad_y(x, y);
  const int n = dim;
  const double h = fd_step(fd_scale, y);
  VectorXd g(n);
  for (int j = 0; j < n; ++j) {
    VectorXd e = VectorXd::Zero(n);
    e[j] = h;
    g[j] = (c(x, y + e) - c(x, y - e)) / (2.0 * h);
  }
  return g;
}

MatrixXd CostModel::cxx(const VectorXd& x, const VectorXd& y) const {
  if (hess_xx) return hess_xx(x, y);
  const int n = dim;
  const double h = fd_step(std::sqrt(fd_scale), x);  // second difference: larger step
  MatrixXd m(n, n);
  const double c0 = c(x, y);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      VectorXd ei = VectorXd::Zero(n), ej = VectorXd::Zero(n);
      ei[i] = h;
      ej[j] = h;
      double v;
      if (i == j) {
        v = (c(x + ei, y) - 2.0 * c0 + c(x - ei, y)) / (h * h);
      } else {
        v = (c(x + ei + ej, y) - c(x + ei - ej, y) - c(x - ei + ej, y) + c(x - ei - ej, y)) /
            (4.0 * h * h);
      }
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

MatrixXd CostModel::cxy(const VectorXd& x, const VectorXd& y) const {
  if (hess_xy) return hess_xy(x, y);
  const int n = dim;
  const double h = fd_step(std::sqrt(fd_scale), x);
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      VectorXd ei = VectorXd::Zero(n), ej = VectorXd::Zero(n);
      ei[i] = h;
      ej[j] = h;
      m(i, j) = (c(x + ei, y + ej) - c(x + ei, y - ej) - c(x - ei, y + ej) + c(x - ei, y - ej)) /
                (4.0 * h * h);
    }
  }
  return m;
}

VectorXd solve_Y(const CostModel& cm, const VectorXd& x, const VectorXd& p, const VectorXd* y0) {
  VectorXd y = y0 ? *y0 : cm.box_center();
  std::vector<double> residual_trace;
  for (int it = 0; it < cm.max_iterations; ++it) {
    const VectorXd f = cm.cx(x, y) - p;
    const double fn = f.norm();
    residual_trace.push_back(fn);
    if (fn <= cm.newton_tol) {
      const MatrixXd j = cm.cxy(x, y);
      if (std::abs(j.determinant()) < cm.det_floor)
        throw ModelError("degenerate cost: |det D2_xy c| under floor at x=" + point_str(x) +
                         ", y=" + point_str(y));
      for (int i = 0; i < cm.dim; ++i) {
        if (y[i] < cm.y_lo[i] || y[i] > cm.y_hi[i])
          throw ModelError("Y(x,p) escaped the certified working box at x=" + point_str(x) +
                           ", p=" + point_str(p) + " -> y=" + point_str(y));
      }
      return y;
    }
    const MatrixXd j = cm.cxy(x, y);
    if (std::abs(j.determinant()) < cm.det_floor)
      throw ModelError("degenerate cost: |det D2_xy c| under floor at x=" + point_str(x) +
                       ", y=" + point_str(y));
    y -= j.partialPivLu().solve(f);
  }
  std::ostringstream os;
  os << "inverse map did not converge (no unique Y or bad initial guess) at x=" << point_str(x)
     << ", p=" << point_str(p) << "; residual trace:";
  for (double r : residual_trace) os << " " << r;
  throw ModelError(os.str());
}

MatrixXd A_from_cost(const CostModel& cm, const VectorXd& x, const VectorXd& p,
                     const VectorXd* y0) {
  const VectorXd y = solve_Y(cm, x, p, y0);
  MatrixXd a = cm.cxx(x, y);
  return 0.5 * (a + a.transpose());
}

MatrixFunction matrix_function_from_cost(const CostModel& cm) {
  MatrixFunction mf;
  mf.dim = cm.dim;
  // warm start: last solved y tracks the smooth branch along a solver sweep
  auto last = std::make_shared<VectorXd>();
  mf.value = [cm, last](const VectorXd& x, const VectorXd& p) -> MatrixXd {
    const VectorXd* guess = (last->size() == cm.dim) ? last.get() : nullptr;
    VectorXd y;
    try {
      y = solve_Y(cm, x, p, guess);
    } catch (const ModelError&) {
      y = solve_Y(cm, x, p, nullptr);  // retry cold
    }
    *last = y;
    MatrixXd a = cm.cxx(x, y);
    return 0.5 * (a + a.transpose());
  };
  return mf;
}

ScalarB scalar_b_from_cost(const CostModel& cm,
                           std::function<double(const VectorXd&, const VectorXd&)> psi) {
  ScalarB b;
  auto last = std::make_shared<VectorXd>();
  b.value = [cm, psi, last](const VectorXd& x, const VectorXd& p) -> double {
    const VectorXd* guess = (last->size() == cm.dim) ? last.get() : nullptr;
    VectorXd y;
    try {
      y = solve_Y(cm, x, p, guess);
    } catch (const ModelError&) {
      y = solve_Y(cm, x, p, nullptr);
    }
    *last = y;
    return std::abs(cm.cxy(x, y).determinant()) * psi(x, p);
  };
  return b;
}

// ---- GeneratingMap -----------------------------------------------------------

MatrixXd GeneratingMap::jac_x(const VectorXd& x, const VectorXd& p) const {
  if (Y_x) return Y_x(x, p);
  const int n = dim;
  const double h = fd_step(fd_scale, x);
  MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    VectorXd e = VectorXd::Zero(n);
    e[j] = h;
    m.col(j) = (Y(x + e, p) - Y(x - e, p)) / (2.0 * h);
  }
  return m;
}

MatrixXd GeneratingMap::jac_p(const VectorXd& x, const VectorXd& p) const {
  if (Y_p) return Y_p(x, p);
  const int n = dim;
  const double h = fd_step(fd_scale, p);
  MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    VectorXd e = VectorXd::Zero(n);
    e[j] = h;
    m.col(j) = (Y(x, p + e) - Y(x, p - e)) / (2.0 * h);
  }
  return m;
}

ProblemSpec problem_from_mapping(const GeneratingMap& gm, const Domain& domain, ScalarFn phi) {
  ProblemSpec ps;
  ps.name = "mapping-generated";
  ps.domain = domain;
  ps.A.dim = gm.dim;
  ps.A.value = [gm](const VectorXd& x, const VectorXd& p) -> MatrixXd {
    const MatrixXd yp = gm.jac_p(x, p);
    if (std::abs(yp.determinant()) < gm.det_floor)
      throw ModelError("mapping degenerate at x=" + point_str(x) + ", p=" + point_str(p) +
                       ": |det Y_p| under floor");
    const MatrixXd a = -yp.partialPivLu().solve(gm.jac_x(x, p));
    return 0.5 * (a + a.transpose());
  };
  ps.B.value = [gm](const VectorXd& x, const VectorXd& p) -> double {
    const double d = std::abs(gm.jac_p(x, p).determinant());
    if (d < gm.det_floor)
      throw ModelError("mapping degenerate at x=" + point_str(x) + ", p=" + point_str(p) +
                       ": |det Y_p| under floor");
    return gm.density(x, p) / d;
  };
  ps.phi = std::move(phi);
  return ps;
}

// ---- affine transforms ---------------------------------------------------------

AffineMap AffineMap::identity(int dim) {
  return AffineMap{MatrixXd::Identity(dim, dim), VectorXd::Zero(dim)};
}

AffineMap AffineMap::inverse() const {
  if (std::abs(M.determinant()) < 1e-14)
    throw ModelError("affine map is not invertible (det ~ 0)");
  MatrixXd mi = M.inverse();
  return AffineMap{mi, -mi * b};
}

std::pair<MatrixFunction, ScalarB> transform_model(const MatrixFunction& A, const ScalarB& B,
                                                   const AffineMap& map) {
  const double det = map.M.determinant();
  if (std::abs(det) < 1e-14) throw ModelError("affine map is not invertible (det ~ 0)");
  const MatrixXd Minv = map.M.inverse();
  const MatrixXd MinvT = Minv.transpose();
  const MatrixXd M = map.M;
  const VectorXd b = map.b;
  const int n = A.dim;

  auto pull = [Minv, b, M](const VectorXd& y, const VectorXd& q, VectorXd& x, VectorXd& p) {
    x = Minv * (y - b);
    p = M.transpose() * q;
  };

  MatrixFunction At;
  At.dim = n;
  At.fd_scale = A.fd_scale;
  At.value = [A, pull, Minv, MinvT](const VectorXd& y, const VectorXd& q) -> MatrixXd {
    VectorXd x, p;
    pull(y, q, x, p);
    return MinvT * A.value(x, p) * Minv;
  };
  if (A.has_grad()) {
    At.grad_p = [A, pull, Minv, MinvT, M, n](const VectorXd& y,
                                             const VectorXd& q) -> std::vector<MatrixXd> {
      VectorXd x, p;
      pull(y, q, x, p);
      auto dp = A.grad_p(x, p);
      std::vector<MatrixXd> out(n);
      for (int k = 0; k < n; ++k) {
        MatrixXd s = MatrixXd::Zero(n, n);
        for (int m = 0; m < n; ++m) s += M(k, m) * dp[m];
        out[k] = MinvT * s * Minv;
      }
      return out;
    };
  }
  if (A.has_hess()) {
    At.hess_p = [A, pull, Minv, MinvT, M, n](const VectorXd& y,
                                             const VectorXd& q) -> std::vector<MatrixXd> {
      VectorXd x, p;
      pull(y, q, x, p);
      auto dpp = A.hess_p(x, p);
      std::vector<MatrixXd> out(n * n);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          MatrixXd s = MatrixXd::Zero(n, n);
          for (int m = 0; m < n; ++m)
            for (int r = 0; r < n; ++r) s += M(k, m) * M(l, r) * dpp[m * n + r];
          out[k * n + l] = MinvT * s * Minv;
        }
      }
      return out;
    };
  }

  ScalarB Bt;
  Bt.fd_scale = B.fd_scale;
  const double scale = 1.0 / (det * det);
  Bt.value = [B, pull, scale](const VectorXd& y, const VectorXd& q) -> double {
    VectorXd x, p;
    pull(y, q, x, p);
    return scale * B.value(x, p);
  };
  if (B.grad_p) {
    Bt.grad_p = [B, pull, scale, M](const VectorXd& y, const VectorXd& q) -> VectorXd {
      VectorXd x, p;
      pull(y, q, x, p);
      return scale * (M * B.grad_p(x, p));
    };
  }
  return {At, Bt};
}

ProblemSpec transform_problem(const ProblemSpec& ps, const AffineMap& map) {
  const int n = ps.A.dim;
  Domain image = ps.domain;
  const MatrixXd& M = map.M;
  const bool diagonal = (n == 2) && std::abs(M(0, 1)) < 1e-14 && std::abs(M(1, 0)) < 1e-14;
  const bool similarity =
      (n == 2) && std::abs((M.transpose() * M - M.col(0).squaredNorm() * MatrixXd::Identity(2, 2))
                               .cwiseAbs()
                               .maxCoeff()) < 1e-12;
  if (ps.domain.kind == Domain::Kind::Rectangle && diagonal && M(0, 0) > 0 && M(1, 1) > 0) {
    image = Domain::rectangle(Vec2(map.apply(VectorXd(ps.domain.lo))),
                              Vec2(map.apply(VectorXd(ps.domain.hi))));
  } else if (ps.domain.kind == Domain::Kind::Disc && similarity) {
    image = Domain::disc(Vec2(map.apply(VectorXd(ps.domain.center))),
                         ps.domain.radius * M.col(0).norm());
  } else {
    throw ModelError(
        "transform_problem: image domain is not representable (rectangle scalings and disc "
        "similarities only); use transform_model for general affine maps");
  }
  auto [At, Bt] = transform_model(ps.A, ps.B, map);
  ProblemSpec out;
  out.name = ps.name + "-transformed";
  out.domain = image;
  out.A = std::move(At);
  out.B = std::move(Bt);
  const AffineMap inv = map.inverse();
  if (ps.phi) {
    auto phi = ps.phi;
    out.phi = [phi, inv](const Vec2& y) { return phi(Vec2(inv.apply(VectorXd(y)))); };
  }
  if (ps.subsolution) {
    auto sub = ps.subsolution;
    out.subsolution = [sub, inv](const Vec2& y) { return sub(Vec2(inv.apply(VectorXd(y)))); };
  }
  return out;
}

// ---- built-in profiles ---------------------------------------------------------

MatrixFunction zero_matrix_function(int dim) {
  MatrixFunction mf;
  mf.dim = dim;
  mf.value = [dim](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(dim, dim); };
  mf.grad_p = [dim](const VectorXd&, const VectorXd&) {
    return std::vector<MatrixXd>(dim, MatrixXd::Zero(dim, dim));
  };
  mf.hess_p = [dim](const VectorXd&, const VectorXd&) {
    return std::vector<MatrixXd>(dim * dim, MatrixXd::Zero(dim, dim));
  };
  return mf;
}

MatrixFunction identity_matrix_function(int dim) {
  MatrixFunction mf = zero_matrix_function(dim);
  mf.value = [dim](const VectorXd&, const VectorXd&) { return MatrixXd::Identity(dim, dim); };
  return mf;
}

MatrixFunction sqrt_profile_matrix_function(double sign, int dim) {
  MatrixFunction mf;
  mf.dim = dim;
  auto gfun = [](const VectorXd& p) {
    const double s = 1.0 - p.squaredNorm();
    if (s <= 0.0) throw ModelError("sqrt profile requires |p| < 1");
    return std::sqrt(s);
  };
  mf.value = [dim, sign, gfun](const VectorXd&, const VectorXd& p) -> MatrixXd {
    const double g = gfun(p);
    return sign * g * (MatrixXd::Identity(dim, dim) - p * p.transpose());
  };
  mf.grad_p = [dim, sign, gfun](const VectorXd&, const VectorXd& p) -> std::vector<MatrixXd> {
    const double g = gfun(p);
    const MatrixXd C = MatrixXd::Identity(dim, dim) - p * p.transpose();
    std::vector<MatrixXd> out(dim);
    for (int k = 0; k < dim; ++k) {
      const double dg = -p[k] / g;
      MatrixXd ek_term = MatrixXd::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          ek_term(i, j) = (i == k ? p[j] : 0.0) + (j == k ? p[i] : 0.0);
        }
      }
      out[k] = sign * (dg * C - g * ek_term);
    }
    return out;
  };
  mf.hess_p = [dim, sign, gfun](const VectorXd&, const VectorXd& p) -> std::vector<MatrixXd> {
    const double g = gfun(p);
    const MatrixXd C = MatrixXd::Identity(dim, dim) - p * p.transpose();
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    std::vector<MatrixXd> out(dim * dim);
    for (int k = 0; k < dim; ++k) {
      for (int l = 0; l < dim; ++l) {
        const double dgk = -p[k] / g;
        const double dgl = -p[l] / g;
        const double d2g = -delta(k, l) / g - p[k] * p[l] / (g * g * g);
        MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i) {
          for (int j = 0; j < dim; ++j) {
            m(i, j) = d2g * C(i, j) - dgk * (delta(i, l) * p[j] + p[i] * delta(j, l)) -
                      dgl * (delta(i, k) * p[j] + p[i] * delta(j, k)) -
                      g * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
          }
        }
        out[k * dim + l] = sign * m;
      }
    }
    return out;
  };
  return mf;
}

MatrixFunction log_profile_matrix_function(double sign, int dim) {
  MatrixFunction mf;
  mf.dim = dim;
  mf.value = [dim, sign](const VectorXd&, const VectorXd& p) -> MatrixXd {
    return sign * (p.squaredNorm() * MatrixXd::Identity(dim, dim) - 2.0 * p * p.transpose());
  };
  mf.grad_p = [dim, sign](const VectorXd&, const VectorXd& p) -> std::vector<MatrixXd> {
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    std::vector<MatrixXd> out(dim);
    for (int k = 0; k < dim; ++k) {
      MatrixXd m(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          m(i, j) = 2.0 * p[k] * delta(i, j) - 2.0 * (delta(i, k) * p[j] + p[i] * delta(j, k));
      out[k] = sign * m;
    }
    return out;
  };
  mf.hess_p = [dim, sign](const VectorXd&, const VectorXd&) -> std::vector<MatrixXd> {
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    std::vector<MatrixXd> out(dim * dim);
    for (int k = 0; k < dim; ++k) {
      for (int l = 0; l < dim; ++l) {
        MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            m(i, j) = 2.0 * delta(k, l) * delta(i, j) -
                      2.0 * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
        out[k * dim + l] = sign * m;
      }
    }
    return out;
  };
  return mf;
}

// ---- built-in costs -------------------------------------------------------------

CostModel sqrt_cost(double sign, const VectorXd& y_lo, const VectorXd& y_hi) {
  CostModel cm;
  cm.dim = static_cast<int>(y_lo.size());
  cm.y_lo = y_lo;
  cm.y_hi = y_hi;
  const int n = cm.dim;
  cm.c = [sign](const VectorXd& x, const VectorXd& y) {
    return sign * std::sqrt(1.0 + (x - y).squaredNorm());
  };
  cm.grad_x = [sign](const VectorXd& x, const VectorXd& y) -> VectorXd {
    const VectorXd z = x - y;
    return sign * z / std::sqrt(1.0 + z.squaredNorm());
  };
  cm.grad_y = [sign](const VectorXd& x, const VectorXd& y) -> VectorXd {
    const VectorXd z = x - y;
    return -sign * z / std::sqrt(1.0 + z.squaredNorm());
  };
  cm.hess_xx = [sign, n](const VectorXd& x, const VectorXd& y) -> MatrixXd {
    const VectorXd z = x - y;
    const double r = std::sqrt(1.0 + z.squaredNorm());
    return sign * (MatrixXd::Identity(n, n) / r - z * z.transpose() / (r * r * r));
  };
  cm.hess_xy = [sign, n](const VectorXd& x, const VectorXd& y) -> MatrixXd {
    const VectorXd z = x - y;
    const double r = std::sqrt(1.0 + z.squaredNorm());
    return sign * (-MatrixXd::Identity(n, n) / r + z * z.transpose() / (r * r * r));
  };
  return cm;
}

CostModel quadratic_cost(const VectorXd& y_lo, const VectorXd& y_hi) {
  CostModel cm;
  cm.dim = static_cast<int>(y_lo.size());
  cm.y_lo = y_lo;
  cm.y_hi = y_hi;
  const int n = cm.dim;
  cm.c = [](const VectorXd& x, const VectorXd& y) { return 0.5 * (x - y).squaredNorm(); };
  cm.grad_x = [](const VectorXd& x, const VectorXd& y) -> VectorXd { return x - y; };
  cm.grad_y = [](const VectorXd& x, const VectorXd& y) -> VectorXd { return y - x; };
  cm.hess_xx = [n](const VectorXd&, const VectorXd&) -> MatrixXd {
    return MatrixXd::Identity(n, n);
  };
  cm.hess_xy = [n](const VectorXd&, const VectorXd&) -> MatrixXd {
    return -MatrixXd::Identity(n, n);
  };
  return cm;
}

CostModel bilinear_cost(const VectorXd& y_lo, const VectorXd& y_hi) {
  CostModel cm;
  cm.dim = static_cast<int>(y_lo.size());
  cm.y_lo = y_lo;
  cm.y_hi = y_hi;
  const int n = cm.dim;
  cm.c = [](const VectorXd& x, const VectorXd& y) { return -x.dot(y); };
  cm.grad_x = [](const VectorXd&, const VectorXd& y) -> VectorXd { return -y; };
  cm.grad_y = [](const VectorXd& x, const VectorXd&) -> VectorXd { return -x; };
  cm.hess_xx = [n](const VectorXd&, const VectorXd&) -> MatrixXd { return MatrixXd::Zero(n, n); };
  cm.hess_xy = [n](const VectorXd&, const VectorXd&) -> MatrixXd {
    return -MatrixXd::Identity(n, n);
  };
  return cm;
}

CostModel log_cost(double sign, const VectorXd& y_lo, const VectorXd& y_hi) {
  CostModel cm;
  cm.dim = static_cast<int>(y_lo.size());
  cm.y_lo = y_lo;
  cm.y_hi = y_hi;
  const int n = cm.dim;
  cm.c = [sign](const VectorXd& x, const VectorXd& y) { return sign * std::log((x - y).norm()); };
  cm.grad_x = [sign](const VectorXd& x, const VectorXd& y) -> VectorXd {
    const VectorXd z = x - y;
    return sign * z / z.squaredNorm();
  };
  cm.grad_y = [sign](const VectorXd& x, const VectorXd& y) -> VectorXd {
    const VectorXd z = x - y;
    return -sign * z / z.squaredNorm();
  };
  cm.hess_xx = [sign, n](const VectorXd& x, const VectorXd& y) -> MatrixXd {
    const VectorXd z = x - y;
    const double r2 = z.squaredNorm();
    return sign * (MatrixXd::Identity(n, n) / r2 - 2.0 * z * z.transpose() / (r2 * r2));
  };
  cm.hess_xy = [sign, n](const VectorXd& x, const VectorXd& y) -> MatrixXd {
    const VectorXd z = x - y;
    const double r2 = z.squaredNorm();
    return sign * (-MatrixXd::Identity(n, n) / r2 + 2.0 * z * z.transpose() / (r2 * r2));
  };
  return cm;
}

}  // namespace mats
