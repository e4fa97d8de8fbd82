#pragma once

#include <vector>

#include "assembly.hpp"
#include "fem_core.hpp"
#include "geometry.hpp"

namespace ofem {

// Discrete velocity/pressure data at one point of one cell.
struct FieldAtPoint {
  Vec2 u;
  Mat2 grad_u;  // (i,j) = d u_i / d x_j
  Vec2 lap_u;
  double div_u = 0.0;
  double p = 0.0;
  Vec2 grad_p;
};

// Evaluates a DiscreteSolution from reference basis data.  `gg` must be
// J^{-1} J^{-T} of the cell.  Pressure slots may be skipped with npl = 0.
inline FieldAtPoint eval_fields(const DiscreteSolution& s, int cell, const CellGeometry& geo,
                                const Mat2& gg, const std::vector<BasisPoint>& vbasis,
                                const std::vector<BasisPoint>& pbasis, bool with_pressure = true) {
  FieldAtPoint out;
  const auto& vdofs = s.dofmap->velocity.cell_dofs[cell];
  const int nv = s.dofmap->n_velocity();
  for (std::size_t i = 0; i < vdofs.size(); ++i) {
    const BasisPoint& b = vbasis[i];
    const double c0 = s.velocity[vdofs[i]];
    const double c1 = s.velocity[nv + vdofs[i]];
    const Vec2 g = geo.inv_jacobian_t * b.grad;
    const double lp = b.hxx * gg.m[0][0] + 2.0 * b.hxy * gg.m[0][1] + b.hyy * gg.m[1][1];
    out.u.x += c0 * b.value;
    out.u.y += c1 * b.value;
    out.grad_u.m[0][0] += c0 * g.x;
    out.grad_u.m[0][1] += c0 * g.y;
    out.grad_u.m[1][0] += c1 * g.x;
    out.grad_u.m[1][1] += c1 * g.y;
    out.lap_u.x += c0 * lp;
    out.lap_u.y += c1 * lp;
  }
  out.div_u = out.grad_u.trace();
  if (with_pressure) {
    const auto& pdofs = s.dofmap->pressure.cell_dofs[cell];
    for (std::size_t j = 0; j < pdofs.size(); ++j) {
      const BasisPoint& b = pbasis[j];
      const double c = s.pressure[pdofs[j]];
      const Vec2 g = geo.inv_jacobian_t * b.grad;
      out.p += c * b.value;
      out.grad_p += g * c;
    }
  }
  return out;
}

}  // namespace ofem
