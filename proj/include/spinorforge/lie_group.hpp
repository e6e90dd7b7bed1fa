#pragma once
#include "spinorforge/grid.hpp"
#include "spinorforge/lie_algebra.hpp"

#include <Eigen/Dense>
#include <vector>

namespace spinorforge {

enum class GroupModel { Abelian, Hyperbolic, Quaternion, SemiDirect };

// Point of a group in its explicit model. Payload layout:
//   Abelian     x in R^n
//   Hyperbolic  (a', a_n), a_n > 0
//   Quaternion  (w, x, y, z) unit, algebra e1 ~ j, e2 ~ k, e3 ~ i
//   SemiDirect  (x1, x2, z)
struct GroupElement {
  GroupModel model;
  Eigen::VectorXd p;
};

GroupModel model_of(const MetricLieAlgebra &alg); // throws for algebras without a model
GroupElement group_identity(const MetricLieAlgebra &alg);
GroupElement group_multiply(const MetricLieAlgebra &alg, const GroupElement &a, const GroupElement &b);
GroupElement group_inverse(const MetricLieAlgebra &alg, const GroupElement &a);
GroupElement group_exp(const MetricLieAlgebra &alg, const Eigen::VectorXd &v, double t = 1.0);
// left Maurer-Cartan form: algebra coordinates of dL_{g^-1} dg, dg a model-coordinate tangent
Eigen::VectorXd maurer_cartan(const MetricLieAlgebra &alg, const GroupElement &g,
                              const Eigen::VectorXd &dg);
double group_distance(const GroupElement &a, const GroupElement &b);
// point in R^3 for mesh export; quaternions are projected stereographically from `pole`
Eigen::Vector3d embed_r3(const GroupElement &g, const Eigen::Vector4d &pole = {-1, 0, 0, 0});

// Per-vertex values of a one-form on the coordinate fields d/dx, d/dy.
struct LieValuedOneForm {
  ParamGrid grid;
  std::vector<Eigen::VectorXd> dx, dy;
};

struct DarbouxResult {
  std::vector<GroupElement> F;
  double max_renormalization = 0; // quaternion drift removed
};

// F(0,0) = base; bottom row first, then every column, fourth-order Magnus steps.
DarbouxResult darboux_integrate(const LieValuedOneForm &xi, const MetricLieAlgebra &alg,
                                const GroupElement &base);
// Same one-form integrated along the transposed tree (left column, then rows).
DarbouxResult darboux_integrate_transposed(const LieValuedOneForm &xi, const MetricLieAlgebra &alg,
                                           const GroupElement &base);

// Per cell ((nx-1) x (ny-1), index j*(nx-1)+i): |d xi(dx,dy) + [xi(dx), xi(dy)]|.
std::vector<double> structure_residual(const LieValuedOneForm &xi, const MetricLieAlgebra &alg);

// Pullback of the Maurer-Cartan form along a grid map, by finite differences.
LieValuedOneForm pullback_one_form(const std::vector<GroupElement> &F, const ParamGrid &grid,
                                   const MetricLieAlgebra &alg);

} // namespace spinorforge
