#include "assembly.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ofem {

namespace {

Vec2 eval_or_zero(const std::function<Vec2(Vec2)>& f, Vec2 x) { return f ? f(x) : Vec2{}; }
double eval_or_zero(const std::function<double(Vec2)>& f, Vec2 x) { return f ? f(x) : 0.0; }

// Velocity value of a discrete field at a reference point of one cell.
Vec2 discrete_velocity(const DiscreteSolution& s, int cell,
                       const std::vector<BasisPoint>& basis) {
  const auto& dofs = s.dofmap->velocity.cell_dofs[cell];
  const int n = s.dofmap->velocity.count;
  Vec2 v;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    v.x += s.velocity[dofs[i]] * basis[i].value;
    v.y += s.velocity[n + dofs[i]] * basis[i].value;
  }
  return v;
}

}  // namespace

LinearSystem assemble(const Mesh& mesh, const DofMap& dofmap, const ProblemData& data,
                      const StabilizationParams& params, const AssemblyOptions& opts,
                      const DiscreteSolution* convection) {
  if (static_cast<int>(params.delta.size()) != mesh.num_cells())
    throw std::invalid_argument("assemble: params were built for a different mesh");
  if (convection) {
    if (convection->mesh->num_cells() != mesh.num_cells() ||
        convection->space.velocity_degree != dofmap.space.velocity_degree)
      throw std::invalid_argument("assemble: convection field lives on a different mesh/space");
  }

  const int ku = dofmap.space.velocity_degree;
  const int quad_degree = opts.quad_degree > 0 ? opts.quad_degree : 2 * ku + 2;
  const QuadratureRule quad = QuadratureRule::make(quad_degree);
  const ReferenceElement& vel_el = ReferenceElement::get(ku);
  const ReferenceElement& pre_el = ReferenceElement::get(dofmap.space.pressure_degree);
  const BasisTable vtab = BasisTable::tabulate(vel_el, quad.points);
  const BasisTable ptab = BasisTable::tabulate(pre_el, quad.points);
  const int nvl = vel_el.size();
  const int npl = pre_el.size();
  const int nv = dofmap.n_velocity();
  const int N = dofmap.n_total();

  LinearSystem sys;
  sys.n_velocity = nv;
  sys.n_pressure = dofmap.n_pressure();
  sys.has_mean_constraint = dofmap.has_mean_constraint;
  sys.rhs = Eigen::VectorXd::Zero(N);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_cells()) * (2 * nvl + npl) * (2 * nvl + npl) +
                (dofmap.has_mean_constraint ? 2 * sys.n_pressure : 0));

  // Physical basis data at one quadrature point.
  std::vector<double> phi(nvl), lap(nvl), bgrad(nvl);
  std::vector<Vec2> dphi(nvl);
  std::vector<double> psi(npl);
  std::vector<Vec2> dpsi(npl);
  std::vector<double> pmean(npl);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geo = mesh.cell_geometry(c);
    const Mat2 ginv = geo.jacobian.inverse();          // d ref / d phys
    const Mat2 gg = ginv * ginv.transpose();           // metric for Laplacians
    const double delta = params.delta[c];
    const double mu = params.mu[c];
    const auto& vdofs = dofmap.velocity.cell_dofs[c];
    const auto& pdofs = dofmap.pressure.cell_dofs[c];

    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * geo.det;
      const Vec2 x = geo.map(quad.points[q]);
      const Vec2 b = convection ? discrete_velocity(*convection, c, vtab.at[q])
                                : eval_or_zero(data.convection, x);
      const double sg = eval_or_zero(data.reaction, x);
      const Vec2 f = eval_or_zero(data.body_force, x);

      for (int i = 0; i < nvl; ++i) {
        const BasisPoint& bp = vtab.at[q][i];
        phi[i] = bp.value;
        dphi[i] = geo.inv_jacobian_t * bp.grad;
        lap[i] = bp.hxx * gg.m[0][0] + 2.0 * bp.hxy * gg.m[0][1] + bp.hyy * gg.m[1][1];
        bgrad[i] = b.dot(dphi[i]);
      }
      for (int j = 0; j < npl; ++j) {
        psi[j] = ptab.at[q][j].value;
        dpsi[j] = geo.inv_jacobian_t * ptab.at[q][j].grad;
      }

      // velocity-velocity: same-component part and grad-div cross part
      for (int i = 0; i < nvl; ++i) {
        const int gi = vdofs[i];
        for (int j = 0; j < nvl; ++j) {
          const int gj = vdofs[j];
          const double strong = -data.nu * lap[j] + bgrad[j] + sg * phi[j];
          const double same = data.nu * dphi[i].dot(dphi[j]) + (bgrad[j] + sg * phi[j]) * phi[i] +
                              delta * strong * bgrad[i];
          const double v00 = w * (same + mu * dphi[i].x * dphi[j].x);
          const double v11 = w * (same + mu * dphi[i].y * dphi[j].y);
          const double v01 = w * mu * dphi[i].x * dphi[j].y;  // test u1, trial u2
          const double v10 = w * mu * dphi[i].y * dphi[j].x;
          trips.emplace_back(gi, gj, v00);
          trips.emplace_back(nv + gi, nv + gj, v11);
          trips.emplace_back(gi, nv + gj, v01);
          trips.emplace_back(nv + gi, gj, v10);
        }
        // velocity-pressure and pressure-velocity
        for (int j = 0; j < npl; ++j) {
          const int gp = dofmap.p_dof(pdofs[j]);
          // -(div v, p) + SUPG delta (grad p, (b.grad) v)
          const double c0 = w * (-psi[j] * dphi[i].x + delta * dpsi[j].x * bgrad[i]);
          const double c1 = w * (-psi[j] * dphi[i].y + delta * dpsi[j].y * bgrad[i]);
          trips.emplace_back(vdofs[i], gp, c0);
          trips.emplace_back(nv + vdofs[i], gp, c1);
          // (div u, q) + SUPG delta (strong residual, grad q)
          const double strong = -data.nu * lap[i] + bgrad[i] + sg * phi[i];
          const double r0 = w * (psi[j] * dphi[i].x + delta * strong * dpsi[j].x);
          const double r1 = w * (psi[j] * dphi[i].y + delta * strong * dpsi[j].y);
          trips.emplace_back(gp, vdofs[i], r0);
          trips.emplace_back(gp, nv + vdofs[i], r1);
        }
        // load
        sys.rhs[vdofs[i]] += w * f.x * (phi[i] + delta * bgrad[i]);
        sys.rhs[nv + vdofs[i]] += w * f.y * (phi[i] + delta * bgrad[i]);
      }
      // pressure-pressure PSPG block and pressure load
      for (int i = 0; i < npl; ++i) {
        const int gi = dofmap.p_dof(pdofs[i]);
        for (int j = 0; j < npl; ++j)
          trips.emplace_back(gi, dofmap.p_dof(pdofs[j]), w * delta * dpsi[i].dot(dpsi[j]));
        sys.rhs[gi] += w * delta * f.dot(dpsi[i]);
      }
    }

    if (dofmap.has_mean_constraint) {
      // integral of each local pressure basis function over this cell
      std::fill(pmean.begin(), pmean.end(), 0.0);
      for (std::size_t q = 0; q < quad.points.size(); ++q)
        for (int j = 0; j < npl; ++j) pmean[j] += quad.weights[q] * geo.det * ptab.at[q][j].value;
      const int mrow = N - 1;
      for (int j = 0; j < npl; ++j) {
        const int gp = dofmap.p_dof(pdofs[j]);
        trips.emplace_back(mrow, gp, pmean[j]);
        trips.emplace_back(gp, mrow, pmean[j]);
      }
    }
  }

  // Neumann boundary load
  if (data.neumann_data) {
    for (int fi = 0; fi < mesh.num_facets(); ++fi) {
      const Facet& f = mesh.facets[fi];
      if (!f.is_boundary() || f.marker != FacetMarker::Neumann) continue;
      const int c = f.cells[0];
      int local = -1;
      for (int e = 0; e < 3; ++e)
        if (mesh.cell_facets[c][e] == fi) local = e;
      const CellGeometry geo = mesh.cell_geometry(c);
      static const Vec2 refv[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
      const Vec2 ra = refv[(local + 1) % 3];
      const Vec2 rb = refv[(local + 2) % 3];
      const double len = mesh.facet_length(fi);
      std::vector<BasisPoint> bp;
      for (std::size_t q = 0; q < quad.edge_points.size(); ++q) {
        const Vec2 ref = ra + (rb - ra) * quad.edge_points[q];
        vel_el.eval(ref, bp);
        const Vec2 g = data.neumann_data(geo.map(ref));
        const double w = quad.edge_weights[q] * len;
        const auto& vdofs = dofmap.velocity.cell_dofs[c];
        for (int i = 0; i < static_cast<int>(vdofs.size()); ++i) {
          sys.rhs[vdofs[i]] += w * g.x * bp[i].value;
          sys.rhs[nv + vdofs[i]] += w * g.y * bp[i].value;
        }
      }
    }
  }

  sys.matrix.resize(N, N);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

void apply_dirichlet(LinearSystem& sys, const DofMap& dofmap, const ProblemData& data) {
  const int N = sys.n_total();
  const int nv = sys.n_velocity;
  std::vector<char> constrained(N, 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < nv; ++i) {
    if (!dofmap.velocity.on_dirichlet[i]) continue;
    const Vec2 g = data.dirichlet_data ? data.dirichlet_data(dofmap.velocity.coords[i]) : Vec2{};
    constrained[i] = 1;
    constrained[nv + i] = 1;
    values[i] = g.x;
    values[nv + i] = g.y;
  }

  sys.rhs -= sys.matrix * values;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.matrix.nonZeros() + nv);
  for (int col = 0; col < sys.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it; ++it) {
      if (constrained[it.row()] || constrained[it.col()]) continue;
      trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < N; ++i)
    if (constrained[i]) trips.emplace_back(i, i, 1.0);
  sys.matrix.setZero();
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  for (int i = 0; i < N; ++i)
    if (constrained[i]) sys.rhs[i] = values[i];
}

void write_matrix_market(const LinearSystem& sys, const std::string& prefix) {
  {
    std::ofstream os(prefix + ".mtx");
    if (!os) throw std::runtime_error("write_matrix_market: cannot open " + prefix + ".mtx");
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << sys.matrix.rows() << " " << sys.matrix.cols() << " " << sys.matrix.nonZeros() << "\n";
    char buf[96];
    for (int col = 0; col < sys.matrix.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it; ++it) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.16e\n", static_cast<long>(it.row()) + 1,
                      static_cast<long>(it.col()) + 1, it.value());
        os << buf;
      }
    }
  }
  {
    std::ofstream os(prefix + "_rhs.mtx");
    if (!os) throw std::runtime_error("write_matrix_market: cannot open " + prefix + "_rhs.mtx");
    os << "%%MatrixMarket matrix array real general\n";
    os << sys.rhs.size() << " 1\n";
    char buf[48];
    for (Eigen::Index i = 0; i < sys.rhs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.16e\n", sys.rhs[i]);
      os << buf;
    }
  }
}

DiscreteSolution split_solution(std::shared_ptr<const Mesh> mesh,
                                std::shared_ptr<const DofMap> dofmap,
                                const Eigen::VectorXd& x) {
  DiscreteSolution s;
  s.mesh = std::move(mesh);
  s.dofmap = std::move(dofmap);
  s.space = s.dofmap->space;
  const int nv = s.dofmap->n_velocity();
  const int np = s.dofmap->n_pressure();
  if (x.size() < 2 * nv + np) throw std::invalid_argument("split_solution: vector too short");
  s.velocity.assign(x.data(), x.data() + 2 * nv);
  s.pressure.assign(x.data() + 2 * nv, x.data() + 2 * nv + np);
  return s;
}

}  // namespace ofem
