#pragma once

#include <vector>

#include "mats/common.hpp"

namespace mats {

/// Planar computational domain: an axis-aligned rectangle or a disc.
/// Provides the signed distance (positive inside), outward unit normals and
/// tangents on the boundary, and dense boundary polygons for the geometric
/// checks.
struct Domain {
  enum class Kind { Rectangle, Disc };

  Kind kind = Kind::Rectangle;
  Vec2 lo{-0.5, -0.5};
  Vec2 hi{0.5, 0.5};
  Vec2 center{0.0, 0.0};
  double radius = 1.0;

  static Domain rectangle(const Vec2& lo, const Vec2& hi);
  static Domain disc(const Vec2& center, double radius);

  /// Signed distance to the boundary, > 0 strictly inside, = 0 on the
  /// boundary, < 0 outside. Exact for the disc; for the rectangle it is the
  /// usual box distance (exact inside and in face regions outside).
  double signed_distance(const Vec2& x) const;

  bool inside(const Vec2& x) const { return signed_distance(x) > 0.0; }

  /// Outward unit normal at (or nearest to) a boundary point. Rectangle
  /// corners resolve to the normal of the closer face.
  Vec2 outward_normal(const Vec2& x) const;

  /// Unit tangent, the normal rotated by +90 degrees.
  Vec2 tangent(const Vec2& x) const;

  /// Axis-aligned bounding box.
  void bounding_box(Vec2& lo_out, Vec2& hi_out) const;

  /// Counter-clockwise polygon tracing the boundary with roughly uniform
  /// spacing; rectangle corners are always vertices.
  std::vector<Vec2> boundary_polygon(int segments_per_edge) const;

  /// Boundary points suitable for curvature-type checks (rectangle corners
  /// excluded since the normal is discontinuous there).
  std::vector<Vec2> boundary_samples(int count) const;

  /// Distance t in (0, tmax] at which the ray x + t*dir first meets the
  /// boundary, for x inside and |dir| = 1. Returns tmax when the ray stays
  /// inside up to tmax.
  double boundary_clip(const Vec2& x, const Vec2& dir, double tmax) const;
};

}  // namespace mats
