#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace mats {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Scalar function of a point in the plane (boundary data, subsolutions, ...).
using ScalarFn = std::function<double(const Vec2&)>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class GridError : public Error {
public:
  using Error::Error;
};

class ModelError : public Error {
public:
  using Error::Error;
};

/// Raised when an operation that requires w = D2u - A(x,Du) > 0 meets a node
/// where it fails; carries the offending node position in the message.
class NonEllipticError : public Error {
public:
  using Error::Error;
};

class SolveError : public Error {
public:
  using Error::Error;
};

/// Eigenvalues of a symmetric 2x2 matrix, lo <= hi.
inline void sym_eigenvalues(const Mat2& m, double& lo, double& hi) {
  const double tr = m(0, 0) + m(1, 1);
  const double off = 0.5 * (m(0, 1) + m(1, 0));
  const double disc = std::sqrt(0.25 * (m(0, 0) - m(1, 1)) * (m(0, 0) - m(1, 1)) + off * off);
  lo = 0.5 * tr - disc;
  hi = 0.5 * tr + disc;
}

inline double min_eigenvalue(const Mat2& m) {
  double lo, hi;
  sym_eigenvalues(m, lo, hi);
  return lo;
}

inline double max_eigenvalue(const Mat2& m) {
  double lo, hi;
  sym_eigenvalues(m, lo, hi);
  return hi;
}

/// Spectral norm of a symmetric 2x2 matrix.
inline double spectral_norm(const Mat2& m) {
  double lo, hi;
  sym_eigenvalues(m, lo, hi);
  return std::max(std::abs(lo), std::abs(hi));
}

/// Deterministic sampling source; every randomized routine draws from one of
/// these so that a run is reproducible from its seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
  }

  Vec2 in_box(const Vec2& lo, const Vec2& hi) {
    return Vec2(uniform(lo.x(), hi.x()), uniform(lo.y(), hi.y()));
  }

  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

/// Shortest-formatted decimal that round-trips; used for all CSV output so
/// identical runs produce identical bytes.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace mats
