#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace ofem {

enum class FacetMarker : std::uint8_t { Interior = 0, Dirichlet = 1, Neumann = 2 };

struct Facet {
  std::array<int, 2> vertices{-1, -1};  // global vertex ids, vertices[0] < vertices[1]
  std::array<int, 2> cells{-1, -1};     // adjacent cells, cells[0] < cells[1]; cells[1] = -1 on boundary
  FacetMarker marker = FacetMarker::Interior;

  bool is_boundary() const { return cells[1] < 0; }
};

// Affine geometry of one triangle: x = origin + J * xhat.
struct CellGeometry {
  Vec2 origin;
  Mat2 jacobian;
  Mat2 inv_jacobian_t;  // transpose of J^{-1}; maps reference gradients to physical
  double det = 0.0;     // det(J) = 2 * area (positive for CCW cells)
  double area = 0.0;
  double diameter = 0.0;  // longest edge
  double rho = 0.0;        // 4 * area / perimeter

  Vec2 map(Vec2 ref) const { return origin + jacobian * ref; }
  Vec2 unmap(Vec2 phys) const { return inv_jacobian_t.transpose() * (phys - origin); }
};

// Conforming triangle mesh of the unit square with newest-vertex bookkeeping.
//
// Invariants (enforced by validate()):
//  - every cell is counterclockwise with positive area,
//  - facet lists are consistent with cells and each facet has 1 or 2 adjacent cells,
//  - every boundary facet carries a Dirichlet or Neumann marker,
//  - peak vertex indices are in {0, 1, 2}.
class Mesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> peak;  // local index (0..2) of the newest vertex of each cell
  std::vector<Facet> facets;
  std::vector<std::array<int, 3>> cell_facets;  // facet id opposite local vertex i

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }
  int num_boundary_facets() const;

  CellGeometry cell_geometry(int cell) const;
  double cell_diameter(int cell) const { return cell_geometry(cell).diameter; }
  double cell_area(int cell) const { return cell_geometry(cell).area; }
  double max_diameter() const;
  double min_diameter() const;
  double total_area() const;
  // max over cells of diameter / (4*area/perimeter)
  double shape_regularity() const;

  // Facet id shared by cells (a, b); -1 if not adjacent.
  int facet_between(int a, int b) const;
  // Midpoint and length of a facet.
  Vec2 facet_midpoint(int facet) const;
  double facet_length(int facet) const;
  // Unit normal of a facet, oriented outward from facets[f].cells[0].
  Vec2 facet_normal(int facet) const;

  // Structured unit-square mesh: two triangles at level 0, each uniform level
  // splits every triangle into four congruent children.  All boundary facets
  // are marked Dirichlet.
  static Mesh unit_square(int levels);

  // Newest-vertex bisection of the marked cells plus conformity closure.
  // Cell ids are not stable across refinement; vertices keep their ids and
  // new vertices are appended.
  Mesh bisect(const std::vector<int>& marked_cells) const;

  // Throws std::runtime_error on any violated invariant.
  void validate() const;

  // Legacy ASCII VTK with optional per-cell and per-vertex scalar fields.
  void write_vtk(const std::string& path,
                 const std::vector<std::pair<std::string, std::vector<double>>>& cell_data = {},
                 const std::vector<std::pair<std::string, std::vector<double>>>& point_data = {}) const;

  // Plain-text dump of vertices, cells, peaks, facets and markers.
  void write_dump(const std::string& path) const;

  // Build facets/cell_facets and peak data from vertices+cells.  markers maps
  // a boundary edge (min vertex, max vertex) to its marker; every boundary
  // edge must be present.  If assign_peaks, the newest-vertex of every cell is
  // set to the vertex with the largest interior angle.
  void finalize(const std::map<std::pair<int, int>, FacetMarker>& markers, bool assign_peaks);
};

}  // namespace ofem
