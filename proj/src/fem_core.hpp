#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "mesh.hpp"

namespace ofem {

// Value and derivatives of one scalar basis function at one point.
struct BasisPoint {
  double value = 0.0;
  Vec2 grad;                              // reference gradient
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;  // reference Hessian
};

// Scalar Lagrange element of degree 1..3 on the reference triangle
// {(0,0),(1,0),(0,1)}.  Node order: the three vertices, then the interior
// nodes of edges (1,2), (2,0), (0,1) walked from first to second endpoint,
// then the barycenter for degree 3.
class ReferenceElement {
 public:
  static const ReferenceElement& get(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  // Evaluates every basis function at a reference point.
  void eval(Vec2 ref, std::vector<BasisPoint>& out) const;

 private:
  explicit ReferenceElement(int degree);
  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<std::pair<int, int>> monomials_;     // exponents (i, j)
  std::vector<std::vector<double>> coefficients_;  // per basis, per monomial
};

// Quadrature on the reference triangle (collapsed tensor Gauss) and the
// reference edge [0,1] (Gauss-Legendre), both exact to `exactness` degree.
struct QuadratureRule {
  int exactness = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2 on the triangle
  std::vector<double> edge_points;
  std::vector<double> edge_weights;  // sum to 1 on [0,1]

  static QuadratureRule make(int target_degree);
};

// Reference basis data tabulated at a fixed set of points.
struct BasisTable {
  int size = 0;
  std::vector<std::vector<BasisPoint>> at;  // [point][basis]

  static BasisTable tabulate(const ReferenceElement& el, const std::vector<Vec2>& pts);
};

enum class PairKind { InfSup, EqualOrder };

// Velocity/pressure pair on a shared mesh.
struct SpacePair {
  int velocity_degree = 2;
  int pressure_degree = 1;
  PairKind kind = PairKind::InfSup;

  static SpacePair parse(const std::string& name);  // "P2/P1" etc.
  std::string name() const;
};

// Scalar Lagrange degrees of freedom: vertex dofs first (vertex id order),
// then facet-interior dofs (facet id order, walked from the lower to the
// higher global vertex id), then cell-interior dofs (cell id order).
struct ScalarDofs {
  int degree = 1;
  int count = 0;
  std::vector<std::vector<int>> cell_dofs;  // per cell, reference node order
  std::vector<Vec2> coords;                 // physical node position per dof
  std::vector<char> on_dirichlet;           // node lies on a Dirichlet facet
  std::vector<char> on_boundary;            // node lies on any boundary facet
};

// Combined layout for the coupled system:
//   [u1 dofs][u2 dofs][pressure dofs][optional mean-value multiplier].
// Scalar velocity dof i maps to rows i and n_velocity + i; pressure dof j to
// row 2*n_velocity + j.
struct DofMap {
  SpacePair space;
  ScalarDofs velocity;
  ScalarDofs pressure;
  bool has_mean_constraint = false;  // set when the mesh has no Neumann facet

  int n_velocity() const { return velocity.count; }
  int n_pressure() const { return pressure.count; }
  int n_total() const { return 2 * velocity.count + pressure.count + (has_mean_constraint ? 1 : 0); }
  int u_dof(int component, int scalar_dof) const { return component * velocity.count + scalar_dof; }
  int p_dof(int scalar_dof) const { return 2 * velocity.count + scalar_dof; }

  static DofMap build(const Mesh& mesh, const SpacePair& space);
};

ScalarDofs build_scalar_dofs(const Mesh& mesh, int degree);

// Nodal interpolation.  The velocity result is laid out as [u1 block][u2
// block] of length 2*n; the pressure result has length n.
std::vector<double> interpolate_velocity(const ScalarDofs& dofs,
                                         const std::function<Vec2(Vec2)>& field);
std::vector<double> interpolate_pressure(const ScalarDofs& dofs,
                                         const std::function<double(Vec2)>& field);

}  // namespace ofem
