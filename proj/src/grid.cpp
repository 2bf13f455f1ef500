#include "mats/grid.hpp"

#include <cmath>

namespace mats {

namespace {

// nodes closer to the boundary than this fraction of h are treated as
// non-interior; keeps the clipped-arm divided differences away from the
// roundoff-amplification regime
constexpr double kSnapFraction = 1e-4;
const double kSqrt2 = std::sqrt(2.0);

// direction unit vectors and natural arm lengths (in units of h)
const Vec2 kDirs[8] = {Vec2(1, 0),  Vec2(-1, 0), Vec2(0, 1),   Vec2(0, -1),
                       Vec2(1, 1) / kSqrt2,  Vec2(-1, -1) / kSqrt2,
                       Vec2(1, -1) / kSqrt2, Vec2(-1, 1) / kSqrt2};
const int kSteps[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};

}  // namespace

std::shared_ptr<const Grid> Grid::build(const Domain& domain, double h) {
  if (!(h > 0.0)) throw GridError("grid spacing must be positive");
  auto grid = std::make_shared<Grid>();
  Grid& g = *grid;
  g.domain = domain;
  g.h = h;

  if (domain.kind == Domain::Kind::Rectangle) {
    const Vec2 side = domain.hi - domain.lo;
    const double fx = side.x() / h, fy = side.y() / h;
    g.nx = static_cast<int>(std::lround(fx));
    g.ny = static_cast<int>(std::lround(fy));
    if (g.nx < 4 || g.ny < 4)
      throw GridError("grid too coarse: fewer than 3 interior nodes per axis");
    if (std::abs(fx - g.nx) > 1e-9 * fx || std::abs(fy - g.ny) > 1e-9 * fy)
      throw GridError("grid spacing does not evenly divide the rectangle sides");
    g.origin = domain.lo;
  } else {
    // bounding box with one-cell margin, grid lines through the center
    const int m = static_cast<int>(std::ceil(domain.radius / h)) + 1;
    g.nx = g.ny = 2 * m;
    g.origin = domain.center - h * Vec2(m, m);
  }

  const int n_cells = (g.nx + 1) * (g.ny + 1);
  g.kinds.assign(n_cells, NodeKind::Exterior);
  g.stored.assign(n_cells, -1);

  // classification
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const Vec2 x = g.node_pos(i, j);
      if (domain.kind == Domain::Kind::Rectangle) {
        const bool edge = (i == 0 || i == g.nx || j == 0 || j == g.ny);
        g.kinds[g.cell_index(i, j)] = edge ? NodeKind::Boundary : NodeKind::Interior;
      } else {
        const double d = domain.signed_distance(x);
        g.kinds[g.cell_index(i, j)] =
            (d > kSnapFraction * h) ? NodeKind::Interior : NodeKind::Exterior;
      }
    }
  }
  if (domain.kind == Domain::Kind::Disc) {
    // ring of stored boundary nodes: non-interior nodes touching an interior one
    for (int j = 0; j <= g.ny; ++j) {
      for (int i = 0; i <= g.nx; ++i) {
        if (g.kinds[g.cell_index(i, j)] != NodeKind::Exterior) continue;
        for (const auto& s : kSteps) {
          if (g.kind(i + s[0], j + s[1]) == NodeKind::Interior) {
            g.kinds[g.cell_index(i, j)] = NodeKind::Boundary;
            break;
          }
        }
      }
    }
  }

  // storage order: lexicographic by (j,i), interior and boundary interleaved
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int c = g.cell_index(i, j);
      if (g.kinds[c] == NodeKind::Exterior) continue;
      g.stored[c] = g.n_stored();
      g.node_cell.push_back(c);
      g.position.push_back(g.node_pos(i, j));
      if (g.kinds[c] == NodeKind::Interior)
        g.interior_nodes.push_back(g.stored[c]);
      else
        g.boundary_nodes.push_back(g.stored[c]);
    }
  }
  g.interior_ordinal_of.assign(g.n_stored(), -1);
  for (int k = 0; k < g.n_interior(); ++k) g.interior_ordinal_of[g.interior_nodes[k]] = k;

  if (domain.kind == Domain::Kind::Disc) {
    // require a sensible interior: at least 3 interior nodes on the center row
    int count = 0;
    const int jc = g.ny / 2;
    for (int i = 0; i <= g.nx; ++i)
      if (g.kind(i, jc) == NodeKind::Interior) ++count;
    if (count < 3) throw GridError("grid too coarse: fewer than 3 interior nodes per axis");
  }

  // stencil arms
  g.arms.resize(g.n_interior());
  g.boundary_adjacent.assign(g.n_interior(), 0);
  for (int k = 0; k < g.n_interior(); ++k) {
    const int c = g.node_cell[g.interior_nodes[k]];
    const int i = c % (g.nx + 1), j = c / (g.nx + 1);
    const Vec2 x = g.node_pos(i, j);
    for (int d = 0; d < 8; ++d) {
      const double full = (d < 4) ? h : kSqrt2 * h;
      const int ii = i + kSteps[d][0], jj = j + kSteps[d][1];
      Arm arm;
      const NodeKind nk = g.kind(ii, jj);
      const bool use_node =
          (nk == NodeKind::Interior) ||
          (nk == NodeKind::Boundary && domain.kind == Domain::Kind::Rectangle);
      if (use_node) {
        arm.len = full;
        arm.neighbor = g.stored[g.cell_index(ii, jj)];
        arm.point = g.node_pos(ii, jj);
        arm.clipped = false;
        if (nk == NodeKind::Boundary) g.boundary_adjacent[k] = 1;
      } else {
        const double t = domain.boundary_clip(x, kDirs[d], full);
        if (!(t > 0.0) || t > full)
          throw GridError("boundary clipping failed; node too close to the boundary");
        arm.len = t;
        arm.neighbor = -1;
        arm.point = x + t * kDirs[d];
        arm.clipped = true;
        g.boundary_adjacent[k] = 1;
      }
      g.arms[k][d] = arm;
    }
  }
  return grid;
}

}  // namespace mats
