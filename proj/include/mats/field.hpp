#pragma once

#include <iosfwd>
#include <string>

#include "mats/grid.hpp"

namespace mats {

/// One real value per stored (non-exterior) node. Fields on disc grids carry
/// a boundary evaluator for the clipped stencil arms; iterates of the solver
/// use the active Dirichlet data for it.
struct ScalarField {
  GridPtr grid;
  VectorXd values;
  ScalarFn boundary_fn;  // required on disc grids for derivative stencils

  static ScalarField zeros(GridPtr g);
  static ScalarField from_function(GridPtr g, const ScalarFn& f);

  double operator[](int stored) const { return values[stored]; }
  double& operator[](int stored) { return values[stored]; }

  /// Value seen by a stencil arm: the neighbor node, or the boundary
  /// evaluator at the clip point.
  double arm_value(const Arm& a) const;

  bool finite() const;
};

/// rows: x1,x2,value over stored nodes in storage order.
void write_csv(const ScalarField& f, std::ostream& os);

/// Legacy ASCII structured-points output (full bounding lattice, exterior
/// nodes written as 0) for external plotting.
void write_vtk(const ScalarField& f, std::ostream& os, const std::string& name);

}  // namespace mats
