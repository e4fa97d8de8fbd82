#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mesh.hpp"

using namespace ofem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("unit square counts per refinement level") {
  // level L has (2^L+1)^2 vertices and 2*4^L cells
  Mesh m0 = Mesh::unit_square(0);
  CHECK(m0.num_vertices() == 4);
  CHECK(m0.num_cells() == 2);
  CHECK(m0.num_facets() == 5);
  CHECK(m0.num_boundary_facets() == 4);

  Mesh m1 = Mesh::unit_square(1);
  CHECK(m1.num_vertices() == 9);
  CHECK(m1.num_cells() == 8);
  CHECK(m1.num_facets() == 16);
  CHECK(m1.num_boundary_facets() == 8);

  Mesh m2 = Mesh::unit_square(2);
  CHECK(m2.num_vertices() == 25);
  CHECK(m2.num_cells() == 32);
  CHECK(m2.num_facets() == 56);
  CHECK(m2.num_boundary_facets() == 16);
}

TEST_CASE("unit square geometry") {
  Mesh m0 = Mesh::unit_square(0);
  CHECK(m0.max_diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(m0.total_area() == doctest::Approx(1.0).epsilon(1e-14));

  Mesh m2 = Mesh::unit_square(2);
  CHECK(m2.max_diameter() == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  CHECK(m2.min_diameter() == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  CHECK(m2.total_area() == doctest::Approx(1.0).epsilon(1e-14));

  // right isoceles triangle: diameter h*sqrt(2), area h^2/2, perimeter h(2+sqrt(2))
  // => diameter / (4 area / perimeter) = 1 + sqrt(2)
  CHECK(m2.shape_regularity() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));

  for (int c = 0; c < m2.num_cells(); ++c) {
    CellGeometry g = m2.cell_geometry(c);
    CHECK(g.det > 0.0);
    CHECK(g.area == doctest::Approx(g.det / 2.0).epsilon(1e-14));
    // map/unmap round trip through an interior reference point
    Vec2 ref{0.3, 0.2};
    Vec2 back = g.unmap(g.map(ref));
    CHECK(back.x == doctest::Approx(ref.x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(ref.y).epsilon(1e-12));
  }
}

TEST_CASE("bisection of one cell closes to a conforming mesh") {
  Mesh m = Mesh::unit_square(0);
  Mesh r = m.bisect({0});
  // the neighbour across the diagonal must be bisected as well
  CHECK(r.num_cells() == 4);
  CHECK(r.num_vertices() == 5);
  r.validate();
  CHECK(r.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  // all four children share the new midpoint of the old diagonal
  int shared = -1;
  for (int v = 0; v < r.num_vertices(); ++v) {
    int count = 0;
    for (const auto& cell : r.cells)
      for (int k = 0; k < 3; ++k)
        if (cell[k] == v) ++count;
    if (count == 4) shared = v;
  }
  REQUIRE(shared >= 0);
  CHECK(r.vertices[shared].x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.vertices[shared].y == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("repeated bisection keeps invariants and bounded shape regularity") {
  Mesh m = Mesh::unit_square(1);
  // refine a corner patch a few times
  for (int round = 0; round < 6; ++round) {
    std::vector<int> marked;
    for (int c = 0; c < m.num_cells(); ++c) {
      CellGeometry g = m.cell_geometry(c);
      Vec2 mid = g.map({1.0 / 3.0, 1.0 / 3.0});
      if (mid.x + mid.y < 0.6) marked.push_back(c);
    }
    m = m.bisect(marked);
    m.validate();
  }
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-13));
  // newest-vertex bisection of right isoceles triangles only produces the
  // same similarity classes, so regularity never exceeds the initial value
  CHECK(m.shape_regularity() <= 1.0 + std::sqrt(2.0) + 1e-12);
  CHECK(m.num_boundary_facets() > 8);
}

TEST_CASE("boundary markers survive refinement") {
  Mesh m = Mesh::unit_square(2);
  for (const Facet& f : m.facets) {
    if (f.is_boundary()) {
      CHECK(f.marker == FacetMarker::Dirichlet);
    } else {
      CHECK(f.marker == FacetMarker::Interior);
    }
  }
  Mesh r = m.bisect({0, 5, 7});
  r.validate();
  for (const Facet& f : r.facets) {
    CHECK((f.is_boundary() ? f.marker == FacetMarker::Dirichlet
                           : f.marker == FacetMarker::Interior));
  }
}

TEST_CASE("facet connectivity") {
  Mesh m = Mesh::unit_square(1);
  int interior = 0;
  for (int f = 0; f < m.num_facets(); ++f) {
    const Facet& facet = m.facets[f];
    CHECK(facet.vertices[0] < facet.vertices[1]);
    if (!facet.is_boundary()) {
      ++interior;
      CHECK(facet.cells[0] < facet.cells[1]);
      CHECK(m.facet_between(facet.cells[0], facet.cells[1]) == f);
      // the normal points out of cells[0]
      CellGeometry g = m.cell_geometry(facet.cells[0]);
      Vec2 centroid = g.map({1.0 / 3.0, 1.0 / 3.0});
      Vec2 n = m.facet_normal(f);
      Vec2 mid = m.facet_midpoint(f);
      CHECK(n.x * (mid.x - centroid.x) + n.y * (mid.y - centroid.y) > 0.0);
      CHECK(std::hypot(n.x, n.y) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(m.facet_length(f) > 0.0);
  }
  CHECK(interior == 8);
}

TEST_CASE("validate rejects broken meshes") {
  Mesh m = Mesh::unit_square(0);
  Mesh flipped = m;
  std::swap(flipped.cells[0][0], flipped.cells[0][1]);  // clockwise cell
  CHECK_THROWS_AS(flipped.validate(), std::runtime_error);

  Mesh bad_peak = m;
  bad_peak.peak[0] = 3;
  CHECK_THROWS_AS(bad_peak.validate(), std::runtime_error);
}

TEST_CASE("mesh dump and vtk writers") {
  Mesh m = Mesh::unit_square(1);
  const std::string dump_path = "mesh_dump_test.txt";
  const std::string vtk_path = "mesh_vtk_test.vtk";
  m.write_dump(dump_path);
  std::string dump = read_file(dump_path);
  CHECK(dump.find("vertices=9") != std::string::npos);
  CHECK(dump.find("cells=8") != std::string::npos);
  CHECK(dump.find("facets=16") != std::string::npos);
  CHECK(dump.find("marker=dirichlet") != std::string::npos);

  std::vector<double> cell_field(m.num_cells(), 1.5);
  std::vector<double> point_field(m.num_vertices(), -2.0);
  m.write_vtk(vtk_path, {{"indicator", cell_field}}, {{"height", point_field}});
  std::string vtk = read_file(vtk_path);
  CHECK(vtk.find("# vtk DataFile Version 3.0") != std::string::npos);
  CHECK(vtk.find("POINTS 9 double") != std::string::npos);
  CHECK(vtk.find("CELLS 8") != std::string::npos);
  CHECK(vtk.find("CELL_DATA 8") != std::string::npos);
  CHECK(vtk.find("POINT_DATA 9") != std::string::npos);
  CHECK(vtk.find("indicator") != std::string::npos);
  CHECK(vtk.find("height") != std::string::npos);

  CHECK_THROWS_AS(m.write_vtk("/nonexistent_dir_xyz/out.vtk"), std::runtime_error);
  std::remove(dump_path.c_str());
  std::remove(vtk_path.c_str());
}
