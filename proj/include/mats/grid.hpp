#pragma once

#include <array>
#include <memory>
#include <vector>

#include "mats/geometry.hpp"

namespace mats {

enum class NodeKind : unsigned char { Exterior, Interior, Boundary };

/// One leg of a difference stencil. Either it reaches a stored node
/// (neighbor >= 0, len = full spacing along that direction) or, next to a
/// curved boundary, it is clipped at the boundary intersection (neighbor = -1,
/// point on the boundary, 0 < len <= full spacing).
struct Arm {
  double len = 0.0;
  int neighbor = -1;
  Vec2 point{0.0, 0.0};
  bool clipped = false;
};

/// Stencil directions, unit vectors; the first four are the axes, the last
/// four the diagonals (spacing sqrt(2)*h).
enum ArmDir : int { XPlus = 0, XMinus, YPlus, YMinus, DPlusPlus, DMinusMinus, DPlusMinus, DMinusPlus };

/// Uniform Cartesian grid over a domain with interior / boundary / exterior
/// node classification. Rectangle boundaries coincide with grid lines; disc
/// boundaries are handled with clipped (Shortley-Weller) stencil arms whose
/// intersection distances come from the circle equation.
struct Grid {
  Domain domain;
  double h = 0.0;
  int nx = 0, ny = 0;  // node (i,j), i in [0,nx], j in [0,ny]
  Vec2 origin{0.0, 0.0};

  std::vector<NodeKind> kinds;          // per (i,j), row-major j*(nx+1)+i
  std::vector<int> stored;              // per (i,j): storage index or -1
  std::vector<int> node_cell;           // per storage index: (i,j) packed
  std::vector<Vec2> position;           // per storage index
  std::vector<int> interior_nodes;      // storage indices, lexicographic
  std::vector<int> boundary_nodes;      // storage indices
  std::vector<std::array<Arm, 8>> arms;  // per interior ordinal
  std::vector<char> boundary_adjacent;   // per interior ordinal: any clipped or boundary arm
  std::vector<int> interior_ordinal_of;  // per storage index: ordinal or -1

  int n_stored() const { return static_cast<int>(position.size()); }
  int n_interior() const { return static_cast<int>(interior_nodes.size()); }

  int cell_index(int i, int j) const { return j * (nx + 1) + i; }
  NodeKind kind(int i, int j) const {
    if (i < 0 || j < 0 || i > nx || j > ny) return NodeKind::Exterior;
    return kinds[cell_index(i, j)];
  }
  Vec2 node_pos(int i, int j) const { return origin + h * Vec2(i, j); }

  /// Builds and classifies the grid. Throws GridError for spacings that do
  /// not fit the domain or leave fewer than 3 interior nodes per axis.
  static std::shared_ptr<const Grid> build(const Domain& domain, double h);
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace mats
