#include "mats/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mats {

Domain Domain::rectangle(const Vec2& lo, const Vec2& hi) {
  if (!(lo.x() < hi.x()) || !(lo.y() < hi.y()))
    throw GridError("rectangle domain requires lo < hi componentwise");
  Domain d;
  d.kind = Kind::Rectangle;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain Domain::disc(const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw GridError("disc domain requires positive radius");
  Domain d;
  d.kind = Kind::Disc;
  d.center = center;
  d.radius = radius;
  return d;
}

double Domain::signed_distance(const Vec2& x) const {
  if (kind == Kind::Disc) return radius - (x - center).norm();
  const double dx = std::min(x.x() - lo.x(), hi.x() - x.x());
  const double dy = std::min(x.y() - lo.y(), hi.y() - x.y());
  if (dx >= 0.0 && dy >= 0.0) return std::min(dx, dy);
  // outside: negative euclidean distance to the box
  const double ox = std::max(0.0, std::max(lo.x() - x.x(), x.x() - hi.x()));
  const double oy = std::max(0.0, std::max(lo.y() - x.y(), x.y() - hi.y()));
  return -std::hypot(ox, oy);
}

Vec2 Domain::outward_normal(const Vec2& x) const {
  if (kind == Kind::Disc) {
    Vec2 r = x - center;
    const double n = r.norm();
    if (n == 0.0) return Vec2(1.0, 0.0);
    return r / n;
  }
  // distance to each face; the closest face wins
  const double d_left = x.x() - lo.x();
  const double d_right = hi.x() - x.x();
  const double d_bottom = x.y() - lo.y();
  const double d_top = hi.y() - x.y();
  const double m = std::min(std::min(d_left, d_right), std::min(d_bottom, d_top));
  if (m == d_left) return Vec2(-1.0, 0.0);
  if (m == d_right) return Vec2(1.0, 0.0);
  if (m == d_bottom) return Vec2(0.0, -1.0);
  return Vec2(0.0, 1.0);
}

Vec2 Domain::tangent(const Vec2& x) const {
  Vec2 n = outward_normal(x);
  return Vec2(-n.y(), n.x());
}

void Domain::bounding_box(Vec2& lo_out, Vec2& hi_out) const {
  if (kind == Kind::Disc) {
    lo_out = center - Vec2(radius, radius);
    hi_out = center + Vec2(radius, radius);
  } else {
    lo_out = lo;
    hi_out = hi;
  }
}

std::vector<Vec2> Domain::boundary_polygon(int segments_per_edge) const {
  std::vector<Vec2> poly;
  if (kind == Kind::Disc) {
    const int n = std::max(8, 4 * segments_per_edge);
    poly.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * M_PI * k / n;
      poly.push_back(center + radius * Vec2(std::cos(th), std::sin(th)));
    }
    return poly;
  }
  const int n = std::max(1, segments_per_edge);
  poly.reserve(4 * n);
  for (int k = 0; k < n; ++k)  // bottom
    poly.push_back(Vec2(lo.x() + (hi.x() - lo.x()) * k / n, lo.y()));
  for (int k = 0; k < n; ++k)  // right
    poly.push_back(Vec2(hi.x(), lo.y() + (hi.y() - lo.y()) * k / n));
  for (int k = 0; k < n; ++k)  // top
    poly.push_back(Vec2(hi.x() - (hi.x() - lo.x()) * k / n, hi.y()));
  for (int k = 0; k < n; ++k)  // left
    poly.push_back(Vec2(lo.x(), hi.y() - (hi.y() - lo.y()) * k / n));
  return poly;
}

std::vector<Vec2> Domain::boundary_samples(int count) const {
  std::vector<Vec2> pts;
  if (kind == Kind::Disc) {
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * M_PI * k / count;
      pts.push_back(center + radius * Vec2(std::cos(th), std::sin(th)));
    }
    return pts;
  }
  // per edge, strictly between the corners
  const int per_edge = std::max(1, count / 4);
  pts.reserve(4 * per_edge);
  for (int k = 0; k < per_edge; ++k) {
    const double s = (k + 0.5) / per_edge;
    pts.push_back(Vec2(lo.x() + (hi.x() - lo.x()) * s, lo.y()));
    pts.push_back(Vec2(lo.x() + (hi.x() - lo.x()) * s, hi.y()));
    pts.push_back(Vec2(lo.x(), lo.y() + (hi.y() - lo.y()) * s));
    pts.push_back(Vec2(hi.x(), lo.y() + (hi.y() - lo.y()) * s));
  }
  return pts;
}

double Domain::boundary_clip(const Vec2& x, const Vec2& dir, double tmax) const {
  if (kind == Kind::Disc) {
    // |x + t dir - c|^2 = R^2, smallest positive root
    const Vec2 r = x - center;
    const double b = r.dot(dir);
    const double c = r.squaredNorm() - radius * radius;
    const double disc = b * b - c;
    if (disc < 0.0) return tmax;
    const double t = -b + std::sqrt(disc);
    if (t <= 0.0) return tmax;
    return std::min(t, tmax);
  }
  double t = tmax;
  auto face = [&](double plane, double xi, double di) {
    if (di == 0.0) return;
    const double s = (plane - xi) / di;
    if (s > 0.0) t = std::min(t, s);
  };
  face(lo.x(), x.x(), dir.x());
  face(hi.x(), x.x(), dir.x());
  face(lo.y(), x.y(), dir.y());
  face(hi.y(), x.y(), dir.y());
  return t;
}

}  // namespace mats
