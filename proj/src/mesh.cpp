#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ofem {

namespace {

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Local index of the vertex with the largest interior angle (ties: lowest index).
int largest_angle_vertex(const Vec2& a, const Vec2& b, const Vec2& c) {
  const std::array<Vec2, 3> v{a, b, c};
  int best = 0;
  double best_cos = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec2 e1 = v[(i + 1) % 3] - v[i];
    const Vec2 e2 = v[(i + 2) % 3] - v[i];
    const double cs = e1.dot(e2) / (e1.norm() * e2.norm());
    if (cs < best_cos - 1e-12) {
      best_cos = cs;
      best = i;
    }
  }
  return best;
}

}  // namespace

void Mesh::finalize(const std::map<std::pair<int, int>, FacetMarker>& markers, bool assign_peaks) {
  facets.clear();
  cell_facets.assign(cells.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> facet_of_edge;
  for (int c = 0; c < num_cells(); ++c) {
    for (int i = 0; i < 3; ++i) {
      const int a = cells[c][(i + 1) % 3];
      const int b = cells[c][(i + 2) % 3];
      const auto key = edge_key(a, b);
      auto it = facet_of_edge.find(key);
      int f;
      if (it == facet_of_edge.end()) {
        f = static_cast<int>(facets.size());
        facet_of_edge.emplace(key, f);
        Facet fc;
        fc.vertices = {key.first, key.second};
        fc.cells = {c, -1};
        facets.push_back(fc);
      } else {
        f = it->second;
        if (facets[f].cells[1] >= 0)
          throw std::runtime_error("mesh: edge shared by more than two cells");
        facets[f].cells[1] = c;
      }
      cell_facets[c][i] = f;
    }
  }
  for (auto& f : facets) {
    if (f.is_boundary()) {
      auto it = markers.find(edge_key(f.vertices[0], f.vertices[1]));
      if (it == markers.end() || it->second == FacetMarker::Interior)
        throw std::runtime_error("mesh: boundary facet without marker");
      f.marker = it->second;
    } else {
      f.marker = FacetMarker::Interior;
      if (f.cells[0] > f.cells[1]) std::swap(f.cells[0], f.cells[1]);
    }
  }
  if (assign_peaks) {
    peak.assign(cells.size(), 0);
    for (int c = 0; c < num_cells(); ++c)
      peak[c] = largest_angle_vertex(vertices[cells[c][0]], vertices[cells[c][1]],
                                     vertices[cells[c][2]]);
  }
}

int Mesh::num_boundary_facets() const {
  int n = 0;
  for (const auto& f : facets) n += f.is_boundary() ? 1 : 0;
  return n;
}

CellGeometry Mesh::cell_geometry(int cell) const {
  if (cell < 0 || cell >= num_cells()) throw std::invalid_argument("cell_geometry: bad cell index");
  const Vec2 p0 = vertices[cells[cell][0]];
  const Vec2 p1 = vertices[cells[cell][1]];
  const Vec2 p2 = vertices[cells[cell][2]];
  CellGeometry g;
  g.origin = p0;
  g.jacobian = Mat2::from_columns(p1 - p0, p2 - p0);
  g.det = g.jacobian.det();
  if (!(g.det > 1e-300)) throw std::runtime_error("cell_geometry: degenerate or flipped cell");
  g.area = 0.5 * g.det;
  g.inv_jacobian_t = g.jacobian.inverse().transpose();
  const double l0 = (p1 - p0).norm();
  const double l1 = (p2 - p1).norm();
  const double l2 = (p0 - p2).norm();
  g.diameter = std::max({l0, l1, l2});
  g.rho = 4.0 * g.area / (l0 + l1 + l2);
  return g;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

double Mesh::min_diameter() const {
  double h = std::numeric_limits<double>::infinity();
  for (int c = 0; c < num_cells(); ++c) h = std::min(h, cell_diameter(c));
  return h;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c) a += cell_area(c);
  return a;
}

double Mesh::shape_regularity() const {
  double q = 0.0;
  for (int c = 0; c < num_cells(); ++c) {
    const CellGeometry g = cell_geometry(c);
    q = std::max(q, g.diameter / g.rho);
  }
  return q;
}

int Mesh::facet_between(int a, int b) const {
  if (a < 0 || b < 0) return -1;
  for (int f : cell_facets[a]) {
    if (facets[f].cells[0] == std::min(a, b) && facets[f].cells[1] == std::max(a, b)) return f;
  }
  return -1;
}

Vec2 Mesh::facet_midpoint(int facet) const {
  const Facet& f = facets[facet];
  return (vertices[f.vertices[0]] + vertices[f.vertices[1]]) * 0.5;
}

double Mesh::facet_length(int facet) const {
  const Facet& f = facets[facet];
  return (vertices[f.vertices[1]] - vertices[f.vertices[0]]).norm();
}

Vec2 Mesh::facet_normal(int facet) const {
  const Facet& f = facets[facet];
  const Vec2 a = vertices[f.vertices[0]];
  const Vec2 b = vertices[f.vertices[1]];
  const Vec2 t = b - a;
  Vec2 n{t.y, -t.x};
  const double len = n.norm();
  n = n * (1.0 / len);
  const int c0 = f.cells[0];
  const Vec2 centroid = (vertices[cells[c0][0]] + vertices[cells[c0][1]] + vertices[cells[c0][2]]) * (1.0 / 3.0);
  if (n.dot(facet_midpoint(facet) - centroid) < 0.0) n = n * -1.0;
  return n;
}

Mesh Mesh::unit_square(int levels) {
  if (levels < 0) throw std::invalid_argument("unit_square: negative level count");
  std::vector<Vec2> verts{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  std::vector<std::array<int, 3>> tris{{0, 1, 2}, {0, 2, 3}};
  std::map<std::pair<int, int>, FacetMarker> markers{
      {{0, 1}, FacetMarker::Dirichlet},
      {{1, 2}, FacetMarker::Dirichlet},
      {{2, 3}, FacetMarker::Dirichlet},
      {{0, 3}, FacetMarker::Dirichlet},
  };

  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = edge_key(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int m = static_cast<int>(verts.size());
      verts.push_back((verts[a] + verts[b]) * 0.5);
      midpoint.emplace(key, m);
      auto mk = markers.find(key);
      if (mk != markers.end()) {
        const FacetMarker marker = mk->second;
        markers.erase(mk);
        markers.emplace(edge_key(key.first, m), marker);
        markers.emplace(edge_key(m, key.second), marker);
      }
      return m;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int m01 = mid(t[0], t[1]);
      const int m12 = mid(t[1], t[2]);
      const int m20 = mid(t[2], t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({m01, t[1], m12});
      next.push_back({m20, m12, t[2]});
      next.push_back({m01, m12, m20});
    }
    tris = std::move(next);
  }

  Mesh mesh;
  mesh.vertices = std::move(verts);
  mesh.cells = std::move(tris);
  mesh.finalize(markers, /*assign_peaks=*/true);
  return mesh;
}

namespace {

struct WorkCell {
  std::array<int, 3> v;
  int peak;
  bool alive;
};

struct BisectState {
  std::vector<Vec2> verts;
  std::vector<WorkCell> cells;
  std::map<std::pair<int, int>, std::array<int, 2>> adjacency;
  std::map<std::pair<int, int>, FacetMarker> markers;
  int alive_count = 0;

  std::pair<int, int> refinement_edge(int c) const {
    const WorkCell& w = cells[c];
    return edge_key(w.v[(w.peak + 1) % 3], w.v[(w.peak + 2) % 3]);
  }

  int neighbor_across(int c, const std::pair<int, int>& e) const {
    const auto it = adjacency.find(e);
    if (it == adjacency.end()) return -1;
    for (int cand : it->second)
      if (cand >= 0 && cand != c) return cand;
    return -1;
  }

  void adjacency_add(int c) {
    const WorkCell& w = cells[c];
    for (int i = 0; i < 3; ++i) {
      const auto key = edge_key(w.v[(i + 1) % 3], w.v[(i + 2) % 3]);
      auto& slots = adjacency.try_emplace(key, std::array<int, 2>{-1, -1}).first->second;
      if (slots[0] == c || slots[1] == c) continue;
      if (slots[0] < 0)
        slots[0] = c;
      else if (slots[1] < 0)
        slots[1] = c;
      else
        throw std::runtime_error("bisect: edge adjacent to more than two cells");
    }
  }

  void adjacency_remove(int c) {
    const WorkCell& w = cells[c];
    for (int i = 0; i < 3; ++i) {
      const auto key = edge_key(w.v[(i + 1) % 3], w.v[(i + 2) % 3]);
      auto it = adjacency.find(key);
      if (it == adjacency.end()) continue;
      for (int& slot : it->second)
        if (slot == c) slot = -1;
      if (it->second[0] < 0 && it->second[1] < 0) adjacency.erase(it);
    }
  }

  // Split cell c at the midpoint m of its refinement edge.
  void split(int c, int m) {
    WorkCell& w = cells[c];
    const int vp = w.v[w.peak];
    const int a = w.v[(w.peak + 1) % 3];
    const int b = w.v[(w.peak + 2) % 3];
    adjacency_remove(c);
    w.alive = false;
    --alive_count;
    const int c1 = static_cast<int>(cells.size());
    cells.push_back({{a, m, vp}, 1, true});
    cells.push_back({{m, b, vp}, 0, true});
    alive_count += 2;
    adjacency_add(c1);
    adjacency_add(c1 + 1);
  }

  void ensure_bisected(int c, int depth) {
    if (!cells[c].alive) return;
    if (depth > static_cast<int>(cells.size()) + 64)
      throw std::runtime_error("bisect: conformity closure did not terminate");
    for (;;) {
      const auto e = refinement_edge(c);
      const int n = neighbor_across(c, e);
      if (n >= 0 && refinement_edge(n) != e) {
        ensure_bisected(n, depth + 1);
        continue;
      }
      const int m = static_cast<int>(verts.size());
      verts.push_back((verts[e.first] + verts[e.second]) * 0.5);
      auto mk = markers.find(e);
      if (mk != markers.end()) {
        const FacetMarker marker = mk->second;
        markers.erase(mk);
        markers.emplace(edge_key(e.first, m), marker);
        markers.emplace(edge_key(m, e.second), marker);
      }
      split(c, m);
      if (n >= 0) split(n, m);
      return;
    }
  }
};

}  // namespace

Mesh Mesh::bisect(const std::vector<int>& marked_cells) const {
  BisectState st;
  st.verts = vertices;
  st.cells.reserve(cells.size() * 2);
  for (int c = 0; c < num_cells(); ++c) {
    st.cells.push_back({cells[c], peak[c], true});
    st.adjacency_add(c);
  }
  st.alive_count = num_cells();
  for (const auto& f : facets)
    if (f.is_boundary()) st.markers.emplace(edge_key(f.vertices[0], f.vertices[1]), f.marker);

  for (int c : marked_cells) {
    if (c < 0 || c >= num_cells()) throw std::invalid_argument("bisect: marked cell out of range");
    st.ensure_bisected(c, 0);
  }

  Mesh out;
  out.vertices = std::move(st.verts);
  out.cells.reserve(st.alive_count);
  out.peak.reserve(st.alive_count);
  for (const auto& w : st.cells) {
    if (!w.alive) continue;
    out.cells.push_back(w.v);
    out.peak.push_back(w.peak);
  }
  out.finalize(st.markers, /*assign_peaks=*/false);
  return out;
}

void Mesh::validate() const {
  if (peak.size() != cells.size()) throw std::runtime_error("validate: peak size mismatch");
  if (cell_facets.size() != cells.size()) throw std::runtime_error("validate: cell_facets size mismatch");
  for (const Vec2& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw std::runtime_error("validate: non-finite vertex");
  int boundary = 0, interior = 0;
  for (int f = 0; f < num_facets(); ++f) {
    const Facet& fc = facets[f];
    if (fc.vertices[0] < 0 || fc.vertices[1] >= num_vertices() || fc.vertices[0] >= fc.vertices[1])
      throw std::runtime_error("validate: bad facet vertices");
    if (fc.cells[0] < 0 || fc.cells[0] >= num_cells())
      throw std::runtime_error("validate: facet without first cell");
    if (fc.is_boundary()) {
      ++boundary;
      if (fc.marker == FacetMarker::Interior)
        throw std::runtime_error("validate: unmarked boundary facet");
    } else {
      ++interior;
      if (fc.cells[1] <= fc.cells[0] || fc.cells[1] >= num_cells())
        throw std::runtime_error("validate: bad facet cell pair");
      if (fc.marker != FacetMarker::Interior)
        throw std::runtime_error("validate: marked interior facet");
    }
  }
  for (int c = 0; c < num_cells(); ++c) {
    if (peak[c] < 0 || peak[c] > 2) throw std::runtime_error("validate: peak out of range");
    const CellGeometry g = cell_geometry(c);  // throws on degeneracy / flipped orientation
    (void)g;
    for (int i = 0; i < 3; ++i) {
      const int f = cell_facets[c][i];
      if (f < 0 || f >= num_facets()) throw std::runtime_error("validate: bad cell facet id");
      const auto key = edge_key(cells[c][(i + 1) % 3], cells[c][(i + 2) % 3]);
      if (facets[f].vertices[0] != key.first || facets[f].vertices[1] != key.second)
        throw std::runtime_error("validate: cell facet vertex mismatch");
      if (facets[f].cells[0] != c && facets[f].cells[1] != c)
        throw std::runtime_error("validate: facet does not reference cell");
    }
  }
  if (3 * num_cells() != 2 * interior + boundary)
    throw std::runtime_error("validate: facet incidence count mismatch");
  if (num_vertices() - num_facets() + num_cells() != 1)
    throw std::runtime_error("validate: Euler characteristic violated");
}

void Mesh::write_vtk(const std::string& path,
                     const std::vector<std::pair<std::string, std::vector<double>>>& cell_data,
                     const std::vector<std::pair<std::string, std::vector<double>>>& point_data) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_vtk: cannot open " + path);
  char buf[128];
  os << "# vtk DataFile Version 3.0\ntriangle mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << num_vertices() << " double\n";
  for (const Vec2& v : vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", v.x, v.y);
    os << buf;
  }
  os << "CELLS " << num_cells() << " " << 4 * num_cells() << "\n";
  for (const auto& c : cells) os << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  os << "CELL_TYPES " << num_cells() << "\n";
  for (int c = 0; c < num_cells(); ++c) os << "5\n";
  if (!cell_data.empty()) {
    os << "CELL_DATA " << num_cells() << "\n";
    for (const auto& [name, values] : cell_data) {
      if (static_cast<int>(values.size()) != num_cells())
        throw std::invalid_argument("write_vtk: cell data size mismatch for " + name);
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.12e\n", v);
        os << buf;
      }
    }
  }
  if (!point_data.empty()) {
    os << "POINT_DATA " << num_vertices() << "\n";
    for (const auto& [name, values] : point_data) {
      if (static_cast<int>(values.size()) != num_vertices())
        throw std::invalid_argument("write_vtk: point data size mismatch for " + name);
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.12e\n", v);
        os << buf;
      }
    }
  }
  if (!os) throw std::runtime_error("write_vtk: write failed for " + path);
}

void Mesh::write_dump(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_dump: cannot open " + path);
  char buf[160];
  os << "mesh vertices=" << num_vertices() << " cells=" << num_cells()
     << " facets=" << num_facets() << " boundary_facets=" << num_boundary_facets() << "\n";
  for (int i = 0; i < num_vertices(); ++i) {
    std::snprintf(buf, sizeof buf, "vertex %d %.17g %.17g\n", i, vertices[i].x, vertices[i].y);
    os << buf;
  }
  for (int c = 0; c < num_cells(); ++c)
    os << "cell " << c << " " << cells[c][0] << " " << cells[c][1] << " " << cells[c][2]
       << " peak=" << peak[c] << "\n";
  for (int f = 0; f < num_facets(); ++f) {
    const Facet& fc = facets[f];
    const char* m = fc.marker == FacetMarker::Interior ? "interior"
                    : fc.marker == FacetMarker::Dirichlet ? "dirichlet"
                                                          : "neumann";
    os << "facet " << f << " " << fc.vertices[0] << " " << fc.vertices[1] << " cells=" << fc.cells[0]
       << "," << fc.cells[1] << " marker=" << m << "\n";
  }
  if (!os) throw std::runtime_error("write_dump: write failed for " + path);
}

}  // namespace ofem
