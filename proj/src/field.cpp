#include "mats/field.hpp"

#include <cmath>
#include <ostream>

namespace mats {

ScalarField ScalarField::zeros(GridPtr g) {
  ScalarField f;
  f.grid = std::move(g);
  f.values = VectorXd::Zero(f.grid->n_stored());
  return f;
}

ScalarField ScalarField::from_function(GridPtr g, const ScalarFn& fn) {
  ScalarField f;
  f.grid = std::move(g);
  f.values.resize(f.grid->n_stored());
  for (int k = 0; k < f.grid->n_stored(); ++k) f.values[k] = fn(f.grid->position[k]);
  f.boundary_fn = fn;
  return f;
}

double ScalarField::arm_value(const Arm& a) const {
  if (!a.clipped) return values[a.neighbor];
  if (!boundary_fn)
    throw GridError("field on a curved-boundary grid needs a boundary evaluator");
  return boundary_fn(a.point);
}

bool ScalarField::finite() const {
  for (int k = 0; k < values.size(); ++k)
    if (!std::isfinite(values[k])) return false;
  return true;
}

void write_csv(const ScalarField& f, std::ostream& os) {
  os << "x1,x2,value\n";
  for (int k = 0; k < f.grid->n_stored(); ++k) {
    const Vec2& x = f.grid->position[k];
    os << format_double(x.x()) << "," << format_double(x.y()) << ","
       << format_double(f.values[k]) << "\n";
  }
}

void write_vtk(const ScalarField& f, std::ostream& os, const std::string& name) {
  const Grid& g = *f.grid;
  os << "# vtk DataFile Version 2.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << g.nx + 1 << " " << g.ny + 1 << " 1\n";
  os << "ORIGIN " << format_double(g.origin.x()) << " " << format_double(g.origin.y()) << " 0\n";
  os << "SPACING " << format_double(g.h) << " " << format_double(g.h) << " 1\n";
  os << "POINT_DATA " << (g.nx + 1) * (g.ny + 1) << "\n";
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int s = g.stored[g.cell_index(i, j)];
      os << format_double(s >= 0 ? f.values[s] : 0.0) << "\n";
    }
  }
}

}  // namespace mats
