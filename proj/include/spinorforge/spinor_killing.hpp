#pragma once
#include "spinorforge/clifford.hpp"
#include "spinorforge/immersion_data.hpp"
#include "spinorforge/lie_algebra.hpp"
#include "spinorforge/lie_group.hpp"

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

namespace spinorforge {

using cplx = std::complex<double>;

// Per-vertex representative [phi] in Spin(n), written in the working frame (e1, e2, n_1..n_q).
struct SpinorField {
  ParamGrid grid;
  int n = 3;
  std::vector<Multivector> phi;
};

struct KillingProblem {
  ImmersionData data;
  MetricLieAlgebra alg;
  Multivector base_spinor; // value at vertex (0, 0); empty means 1
};

KillingProblem make_problem(ImmersionData data, MetricLieAlgebra alg);

// (-1/2 sum_j e_j B(X, e_j) + 1/2 Gamma(X)) phi, X a tangent vector in the frame (e1, e2).
Multivector killing_rhs(const KillingProblem &p, const Multivector &phi, const Eigen::Vector2d &X,
                        int v);
// Bivector b with nabla'_{d/dc} phi = 0  <=>  d phi / dc = b phi.
Multivector transport_generator(const KillingProblem &p, int i, int j, int c);

struct HolonomyReport {
  std::vector<double> plaquette; // per cell, |loop(phi) - phi| / h^2, 0 on boundary cells
  double max = 0;
  double threshold = 0;
  bool integrable = true;
};

struct KillingSolution {
  SpinorField field;
  HolonomyReport holonomy;
  double max_renormalization = 0;
};

// Transport along the bottom row, then up every column, with RK4 steps; threshold <= 0 means
// 10 h^2.
KillingSolution solve_killing(const KillingProblem &p, double threshold = 0);
HolonomyReport plaquette_holonomy(const KillingProblem &p, const SpinorField &field, double threshold);
// max over c of |d phi/dc - b_c phi| / mu per vertex
std::vector<double> killing_residual(const SpinorField &field, const KillingProblem &p);

// tau(phi) X phi for X in frame coordinates; throws NumericalError when the result is not a vector.
Eigen::VectorXd xi_value(const Multivector &phi, const Eigen::VectorXd &X, double tol = 1e-10);
LieValuedOneForm xi_from_spinor(const SpinorField &field, const KillingProblem &p);

// a with xi_{phi a}(underline e_i) = e_i at the base vertex, canonical sign.
Multivector normalizing_factor(const SpinorField &field, const KillingProblem &p);
SpinorField normalize_spinor(const SpinorField &field, const KillingProblem &p);

struct ReconstructOptions {
  double holonomy_threshold = 0; // <= 0: 10 h^2
  double structure_tolerance = 0; // <= 0: 10 h^2
};

struct ReconstructReport {
  std::vector<GroupElement> F;
  KillingSolution solution;
  double structure_residual = 0;
  double isometry_error = 0;
  double sff_error = 0;
  double normal_connection_error = 0;
  double max_renormalization = 0;
  bool integrable = true;
  bool structure_ok = true;
};

ReconstructReport reconstruct_immersion(const KillingProblem &p, const ReconstructOptions &opt = {});
// Second fundamental form and normal connection errors of a grid map against the data,
// normals taken from the spinor field.
void immersion_errors(const std::vector<GroupElement> &F, const SpinorField &field,
                      const KillingProblem &p, ReconstructReport &out);

struct SpinorOfImmersion {
  SpinorField field;
  ImmersionData data;
};
// F must be conformal on the grid (|F_x| = |F_y|, <F_x, F_y> = 0 within conformal_tol).
SpinorOfImmersion spinor_of_immersion(const std::vector<GroupElement> &F, const ParamGrid &grid,
                                      const MetricLieAlgebra &alg, double conformal_tol = 1e-2);

// |sum_a e_a nabla_{e_a} phi - (H + gamma) phi| per vertex; H in normal coordinates,
// defaults to half the trace of B.
std::vector<double> dirac_residual(const SpinorField &field, const KillingProblem &p,
                                   const std::vector<Eigen::VectorXd> &H = {});

// n = 3: [phi] = z1 + j z2 under e1 ~ j, e2 ~ k, e3 ~ i.
std::pair<cplx, cplx> z_of_spinor(const Multivector &phi);
Multivector spinor_of_z(cplx z1, cplx z2);
// [psi] = z1 - j i z2 as a quaternion (w, x, y, z) = w + x i + y j + z k
Eigen::Vector4d psi_of_z(cplx z1, cplx z2);
// xi(x1 e1 + x2 e2 + x3 nu) from (z1, z2), in (e1, e2, e3) algebra coordinates
Eigen::Vector3d xi_from_z(cplx z1, cplx z2, const Eigen::Vector3d &X);
// |D psi - H psi + i psibar| per vertex, Sigma^+ = span(j, k), i acting on the right.
std::vector<double> morel_residual(const SpinorField &field, const KillingProblem &p, double H);

} // namespace spinorforge
