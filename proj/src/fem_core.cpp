#include "fem_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofem {

namespace {

// Monomial exponent order shared by all coefficient tables below.
constexpr std::pair<int, int> kMonomials[10] = {
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};

constexpr double kCoef1[3][3] = {
    {1.0, -1.0, -1.0},
    {0.0, 1.0, 0.0},
    {0.0, 0.0, 1.0},
};

constexpr double kCoef2[6][6] = {
    {1.0, -3.0, -3.0, 2.0, 4.0, 2.0},
    {0.0, -1.0, 0.0, 2.0, 0.0, 0.0},
    {0.0, 0.0, -1.0, 0.0, 0.0, 2.0},
    {0.0, 0.0, 0.0, 0.0, 4.0, 0.0},
    {0.0, 0.0, 4.0, 0.0, -4.0, -4.0},
    {0.0, 4.0, 0.0, -4.0, -4.0, 0.0},
};

constexpr double kCoef3[10][10] = {
    {1.0, -11.0 / 2.0, -11.0 / 2.0, 9.0, 18.0, 9.0, -9.0 / 2.0, -27.0 / 2.0, -27.0 / 2.0, -9.0 / 2.0},
    {0.0, 1.0, 0.0, -9.0 / 2.0, 0.0, 0.0, 9.0 / 2.0, 0.0, 0.0, 0.0},
    {0.0, 0.0, 1.0, 0.0, 0.0, -9.0 / 2.0, 0.0, 0.0, 0.0, 9.0 / 2.0},
    {0.0, 0.0, 0.0, 0.0, -9.0 / 2.0, 0.0, 0.0, 27.0 / 2.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, -9.0 / 2.0, 0.0, 0.0, 0.0, 27.0 / 2.0, 0.0},
    {0.0, 0.0, -9.0 / 2.0, 0.0, 9.0 / 2.0, 18.0, 0.0, 0.0, -27.0 / 2.0, -27.0 / 2.0},
    {0.0, 0.0, 9.0, 0.0, -45.0 / 2.0, -45.0 / 2.0, 0.0, 27.0 / 2.0, 27.0, 27.0 / 2.0},
    {0.0, 9.0, 0.0, -45.0 / 2.0, -45.0 / 2.0, 0.0, 27.0 / 2.0, 27.0, 27.0 / 2.0, 0.0},
    {0.0, -9.0 / 2.0, 0.0, 18.0, 9.0 / 2.0, 0.0, -27.0 / 2.0, -27.0 / 2.0, 0.0, 0.0},
    {0.0, 0.0, 0.0, 0.0, 27.0, 0.0, 0.0, -27.0, -27.0, 0.0},
};

std::vector<Vec2> lagrange_nodes(int degree) {
  std::vector<Vec2> n{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Vec2 v[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const int pairs[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  for (const auto& e : pairs) {
    for (int m = 1; m < degree; ++m) {
      const double t = static_cast<double>(m) / degree;
      n.push_back(v[e[0]] + (v[e[1]] - v[e[0]]) * t);
    }
  }
  if (degree == 3) n.push_back({1.0 / 3.0, 1.0 / 3.0});
  return n;
}

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  nodes_ = lagrange_nodes(degree);
  const int n = static_cast<int>(nodes_.size());
  monomials_.assign(kMonomials, kMonomials + n);
  coefficients_.resize(n);
  for (int i = 0; i < n; ++i) {
    coefficients_[i].resize(n);
    for (int j = 0; j < n; ++j) {
      coefficients_[i][j] = degree == 1 ? kCoef1[i][j] : degree == 2 ? kCoef2[i][j] : kCoef3[i][j];
    }
  }
}

const ReferenceElement& ReferenceElement::get(int degree) {
  if (degree < 1 || degree > 3) throw std::invalid_argument("ReferenceElement: degree must be 1..3");
  static const ReferenceElement p1(1), p2(2), p3(3);
  return degree == 1 ? p1 : degree == 2 ? p2 : p3;
}

void ReferenceElement::eval(Vec2 ref, std::vector<BasisPoint>& out) const {
  const int n = size();
  out.assign(n, BasisPoint{});
  // Monomial values and derivatives at ref.
  double val[10], dx[10], dy[10], dxx[10], dxy[10], dyy[10];
  for (int m = 0; m < n; ++m) {
    const int i = monomials_[m].first;
    const int j = monomials_[m].second;
    const double xi = i == 0 ? 1.0 : std::pow(ref.x, i);
    const double yj = j == 0 ? 1.0 : std::pow(ref.y, j);
    val[m] = xi * yj;
    dx[m] = i == 0 ? 0.0 : i * std::pow(ref.x, i - 1) * yj;
    dy[m] = j == 0 ? 0.0 : j * xi * std::pow(ref.y, j - 1);
    dxx[m] = i < 2 ? 0.0 : i * (i - 1) * std::pow(ref.x, i - 2) * yj;
    dyy[m] = j < 2 ? 0.0 : j * (j - 1) * xi * std::pow(ref.y, j - 2);
    dxy[m] = (i == 0 || j == 0) ? 0.0 : i * j * std::pow(ref.x, i - 1) * std::pow(ref.y, j - 1);
  }
  for (int b = 0; b < n; ++b) {
    BasisPoint& p = out[b];
    const auto& c = coefficients_[b];
    for (int m = 0; m < n; ++m) {
      p.value += c[m] * val[m];
      p.grad.x += c[m] * dx[m];
      p.grad.y += c[m] * dy[m];
      p.hxx += c[m] * dxx[m];
      p.hxy += c[m] * dxy[m];
      p.hyy += c[m] * dyy[m];
    }
  }
}

namespace {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Root of P_n on [-1,1].
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      if (n == 1) p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? t : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (t * pn - pn1) / (t * t - 1.0);
      const double dt = pn / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    // Map from [-1,1] to [0,1]; reverse so nodes ascend.
    x[n - 1 - i] = 0.5 * (1.0 + t);
    w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

QuadratureRule QuadratureRule::make(int target_degree) {
  if (target_degree < 1 || target_degree > 12)
    throw std::invalid_argument("QuadratureRule: target degree must be 1..12");
  QuadratureRule q;
  q.exactness = target_degree;

  // Collapsed tensor rule: x = s, y = t*(1-s), weight w_s*w_t*(1-s); with n
  // points per direction this is exact for total degree 2n-2 in the triangle
  // coordinates (the extra (1-s) factor raises the s-degree by one).
  const int n_tri = (target_degree + 3) / 2;  // ceil((d+2)/2)
  std::vector<double> xs, ws, xt, wt;
  gauss_legendre(n_tri, xs, ws);
  xt = xs;
  wt = ws;
  for (int i = 0; i < n_tri; ++i) {
    for (int j = 0; j < n_tri; ++j) {
      q.points.push_back({xs[i], xt[j] * (1.0 - xs[i])});
      q.weights.push_back(ws[i] * wt[j] * (1.0 - xs[i]));
    }
  }

  const int n_edge = (target_degree + 2) / 2;  // ceil((d+1)/2)
  gauss_legendre(n_edge, q.edge_points, q.edge_weights);
  return q;
}

BasisTable BasisTable::tabulate(const ReferenceElement& el, const std::vector<Vec2>& pts) {
  BasisTable t;
  t.size = el.size();
  t.at.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) el.eval(pts[i], t.at[i]);
  return t;
}

SpacePair SpacePair::parse(const std::string& name) {
  static const std::pair<const char*, SpacePair> table[] = {
      {"P1/P1", {1, 1, PairKind::EqualOrder}},
      {"P2/P1", {2, 1, PairKind::InfSup}},
      {"P2/P2", {2, 2, PairKind::EqualOrder}},
      {"P3/P2", {3, 2, PairKind::InfSup}},
      {"P3/P3", {3, 3, PairKind::EqualOrder}},
  };
  for (const auto& [key, value] : table)
    if (name == key) return value;
  throw std::invalid_argument("SpacePair: unknown pair \"" + name +
                              "\" (expected P1/P1, P2/P1, P2/P2, P3/P2 or P3/P3)");
}

std::string SpacePair::name() const {
  return "P" + std::to_string(velocity_degree) + "/P" + std::to_string(pressure_degree);
}

ScalarDofs build_scalar_dofs(const Mesh& mesh, int degree) {
  if (degree < 1 || degree > 3) throw std::invalid_argument("build_scalar_dofs: degree must be 1..3");
  ScalarDofs d;
  d.degree = degree;
  const int per_edge = degree - 1;
  const int per_cell = degree == 3 ? 1 : 0;
  const int nv = mesh.num_vertices();
  const int nf = mesh.num_facets();
  d.count = nv + per_edge * nf + per_cell * mesh.num_cells();
  d.coords.resize(d.count);
  d.on_dirichlet.assign(d.count, 0);
  d.on_boundary.assign(d.count, 0);

  for (int v = 0; v < nv; ++v) d.coords[v] = mesh.vertices[v];
  for (int f = 0; f < nf; ++f) {
    const auto& fc = mesh.facets[f];
    const Vec2 a = mesh.vertices[fc.vertices[0]];
    const Vec2 b = mesh.vertices[fc.vertices[1]];
    for (int m = 0; m < per_edge; ++m) {
      const double t = static_cast<double>(m + 1) / degree;
      d.coords[nv + f * per_edge + m] = a + (b - a) * t;
    }
    if (fc.is_boundary()) {
      const bool dir = fc.marker == FacetMarker::Dirichlet;
      for (int k = 0; k < 2; ++k) {
        d.on_boundary[fc.vertices[k]] = 1;
        if (dir) d.on_dirichlet[fc.vertices[k]] = 1;
      }
      for (int m = 0; m < per_edge; ++m) {
        d.on_boundary[nv + f * per_edge + m] = 1;
        if (dir) d.on_dirichlet[nv + f * per_edge + m] = 1;
      }
    }
  }

  const ReferenceElement& el = ReferenceElement::get(degree);
  d.cell_dofs.assign(mesh.num_cells(), std::vector<int>(el.size(), -1));
  const int pairs[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto& cd = d.cell_dofs[c];
    for (int i = 0; i < 3; ++i) cd[i] = mesh.cells[c][i];
    int slot = 3;
    for (int e = 0; e < 3; ++e) {
      const int f = mesh.cell_facets[c][e];  // facet opposite vertex e = edge (e+1, e+2)
      const int va = mesh.cells[c][pairs[e][0]];
      const bool forward = mesh.facets[f].vertices[0] == va;
      for (int m = 0; m < per_edge; ++m) {
        const int pos = forward ? m : per_edge - 1 - m;
        cd[slot++] = nv + f * per_edge + pos;
      }
    }
    if (per_cell == 1) {
      const int id = nv + per_edge * nf + c;
      cd[slot++] = id;
      const CellGeometry g = mesh.cell_geometry(c);
      d.coords[id] = g.map({1.0 / 3.0, 1.0 / 3.0});
    }
  }
  return d;
}

DofMap DofMap::build(const Mesh& mesh, const SpacePair& space) {
  DofMap dm;
  dm.space = space;
  dm.velocity = build_scalar_dofs(mesh, space.velocity_degree);
  dm.pressure = build_scalar_dofs(mesh, space.pressure_degree);
  bool has_neumann = false;
  for (const auto& f : mesh.facets)
    if (f.is_boundary() && f.marker == FacetMarker::Neumann) has_neumann = true;
  dm.has_mean_constraint = !has_neumann;
  return dm;
}

std::vector<double> interpolate_velocity(const ScalarDofs& dofs,
                                         const std::function<Vec2(Vec2)>& field) {
  std::vector<double> out(2 * dofs.count);
  for (int i = 0; i < dofs.count; ++i) {
    const Vec2 v = field(dofs.coords[i]);
    out[i] = v.x;
    out[dofs.count + i] = v.y;
  }
  return out;
}

std::vector<double> interpolate_pressure(const ScalarDofs& dofs,
                                         const std::function<double(Vec2)>& field) {
  std::vector<double> out(dofs.count);
  for (int i = 0; i < dofs.count; ++i) out[i] = field(dofs.coords[i]);
  return out;
}

}  // namespace ofem
