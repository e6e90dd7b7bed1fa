#pragma once
#include "spinorforge/clifford.hpp"
#include "spinorforge/grid.hpp"
#include "spinorforge/lie_algebra.hpp"

#include <Eigen/Dense>
#include <array>
#include <json.hpp>
#include <vector>

namespace spinorforge {

// Surface data over a conformal grid. The working frame of TM + E at a vertex is
// (e1, e2, n_1, ..., n_q) with e_c = d/dc / mu.
//   frame[v]              n x n orthogonal; column a = image of the a-th frame vector in the
//                         algebra, row i = (T_i, f_i): tangent and normal components of e_i
//   B[v][r]               symmetric 2x2, B^r(e_a, e_b); for q = 1 this is the shape operator S
//   normal_connection[v]  q x q skew coefficients N_x, N_y: nabla_{d/dc} n_s = sum_r N_c(r, s) n_r
//   U[v]                  optional distinguished field in frame coordinates (hyperbolic space)
struct ImmersionData {
  ParamGrid grid;
  int n = 3, q = 1;
  std::vector<Eigen::MatrixXd> frame;
  std::vector<std::vector<Eigen::Matrix2d>> B;
  std::vector<std::array<Eigen::MatrixXd, 2>> normal_connection; // empty: zero
  std::vector<Eigen::VectorXd> U;

  const Eigen::Matrix2d &S(int v) const { return B[v][0]; }
  Eigen::MatrixXd normal_coeff(int v, int c) const;
};

// Throws InputError on size mismatch, orthonormality residual > tol or asymmetric B.
void validate(const ImmersionData &d, double tol = 1e-10);
double orthonormality_residual(const ImmersionData &d);

// Levi-Civita form of the grid metric: nabla_{d/dc} e1 = w_c e2, w_x = -mu_y/mu, w_y = mu_x/mu.
std::array<double, 2> tangent_connection(const ParamGrid &g, int i, int j);
// Gauss curvature -Laplacian(log mu) / mu^2 per vertex.
std::vector<double> gauss_curvature(const ParamGrid &g);
// Full connection matrix of TM + E along d/dc (tangent rotation block plus N_c).
Eigen::MatrixXd connection_matrix(const ImmersionData &d, int i, int j, int c);
// Skew matrix of Z -> -B(d/dc, Z^T) + B*(d/dc, Z^N) in frame coordinates.
Eigen::MatrixXd second_fundamental_operator(const ImmersionData &d, int v, int c);
// Connection of the algebra pulled back to the frame: Phi^T Gamma(Phi X) Phi.
Eigen::MatrixXd frame_gamma(const MetricLieAlgebra &alg, const Eigen::MatrixXd &frame,
                            const Eigen::VectorXd &X);

// Residual of d(Phi^T)/dc = (mu Gamma_fr(e_c) + Bop_c - Conn_c) Phi^T divided by mu:
// column k is the equation of the left-invariant field e_k.
Eigen::MatrixXd frame_compat_matrix(const ImmersionData &d, const MetricLieAlgebra &alg, int i,
                                    int j, int c);

struct FrameCompatResiduals {
  std::vector<double> tangent;  // max over c, j of |nabla_{e_c} T_j - ... - f_j S(e_c)|
  std::vector<double> function; // max over c, j of |df_j(e_c) - ... + h(e_c, T_j)|
};
FrameCompatResiduals frame_compat_residuals(const ImmersionData &d, const MetricLieAlgebra &alg);

// Surfaces in the homogeneous spaces with vertical field e3 = T + f nu.
struct EKTData {
  ParamGrid grid;
  std::vector<Eigen::Vector2d> T;
  std::vector<double> f;
  std::vector<Eigen::Matrix2d> S;
  double kappa = 0, tau = 0;
};

// T, f taken from row `vertical` of the frame (the algebra index of the vertical field).
EKTData ekt_from_immersion(const ImmersionData &d, double kappa, double tau, int vertical = 2);
void validate(const EKTData &e, double tol = 1e-10);

struct EKTResiduals {
  std::vector<double> tangent, function, norm;
};
EKTResiduals ekt_compat_residuals(const EKTData &e);
// K - det S - tau^2 - (kappa - 4 tau^2) f^2
std::vector<double> daniel_gauss_residual(const EKTData &e);
// (nabla_{e1} S) e2 - (nabla_{e2} S) e1 - (kappa - 4 tau^2) f (<e2,T> e1 - <e1,T> e2)
std::vector<Eigen::Vector2d> daniel_codazzi_residual(const EKTData &e);

// Hypersurface Gamma-tilde in Cl_p, p = n - 1. T is p x n (column i = T_i), f has n entries.
Multivector gamma_tilde_general(const MetricLieAlgebra &alg, const Eigen::MatrixXd &T,
                                const Eigen::VectorXd &f, const Eigen::VectorXd &X);
// n = 3 form sum_i <X,T_i> sum_{j<k} Gamma_ij^k eps_jk (f_l - T_l) omega in Cl_2.
Multivector gamma_tilde_dim3(const MetricLieAlgebra &alg, const Eigen::MatrixXd &T,
                             const Eigen::VectorXd &f, const Eigen::VectorXd &X);
Multivector gamma_tilde(const ImmersionData &d, const MetricLieAlgebra &alg,
                        const Eigen::Vector2d &X, int v, bool use_dim3 = false);
// {(2 tau - sigma) <X,T> (T nu - f) - tau X nu} omega in Cl_3 on (e1, e2, nu); rejects tau = 0.
Multivector ekt_gamma_bivector(const EKTData &e, const Eigen::Vector2d &X, int v);

struct GCRResiduals {
  std::vector<double> gauss;                // signed
  std::vector<Eigen::VectorXd> codazzi;     // entry b * q + r
  std::vector<Eigen::MatrixXd> ricci;       // q x q
  double max_gauss() const;
  double max_codazzi() const;
  double max_ricci() const;
  // copy with boundary vertices zeroed (boundary stencils are one-sided)
  GCRResiduals interior(const ParamGrid &g) const;
};
GCRResiduals gcr_residuals(const ImmersionData &d, const MetricLieAlgebra &alg);

struct HnUResidual {
  std::vector<double> residual;
  double norm_derivative = 0; // max |d |U|^2|
};
// U defaults to Phi^T l when d.U is empty.
HnUResidual hn_u_residual(const ImmersionData &d, const MetricLieAlgebra &alg);
std::vector<Eigen::VectorXd> hn_u_field(const ImmersionData &d, const MetricLieAlgebra &alg);

nlohmann::json to_json(const ImmersionData &d);
ImmersionData immersion_from_json(const nlohmann::json &j);

struct ResidualSummary {
  double max = 0, mean = 0;
};
ResidualSummary summarize(const std::vector<double> &field);

} // namespace spinorforge
