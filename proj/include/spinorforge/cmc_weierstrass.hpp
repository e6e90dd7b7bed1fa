#pragma once
#include "spinorforge/grid.hpp"
#include "spinorforge/lie_algebra.hpp"
#include "spinorforge/lie_group.hpp"

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace spinorforge {

using cplx = std::complex<double>;

// Mean curvature H and the constants of a unimodular connection
// Gamma(X) = X1 mu1 e2 e3 + X2 mu2 e3 e1 + X3 mu3 e1 e2.
struct HPotential {
  double H = 0;
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();
};

// H (1 + |g|^2)^2 - (i/2)(mu1 |1 - g^2|^2 + mu2 |1 + g^2|^2 + 4 mu3 |g|^2)
cplx h_potential(const HPotential &pot, cplx g);
// (dR/dg, dR/dgbar) with g and gbar independent
std::pair<cplx, cplx> h_potential_wirtinger(const HPotential &pot, cplx g);

// Projection from the south pole -e3.
cplx stereographic(const Eigen::Vector3d &nu);
Eigen::Vector3d inverse_stereographic(cplx g);

struct WeierstrassData {
  ParamGrid grid;           // mu is the induced conformal factor once f is known
  std::vector<cplx> g;      // stereographic left-invariant Gauss map
  std::vector<cplx> f;      // Weierstrass density
  std::vector<Eigen::Vector3d> nu;
};

// Unimodular constants of an algebra whose connection has the form above; InputError otherwise.
HPotential potential_of(const MetricLieAlgebra &alg, double H);

// Fills nu, f = 4 g_z / R(g) and mu = |f| (1 + |g|^2) / 2. Rejects Gauss maps within angle
// 1e-3 of the south pole and vertices where |R(g)| < singular_tol.
WeierstrassData weierstrass_from_g(const ParamGrid &grid, std::vector<cplx> g, const HPotential &pot,
                                   double singular_tol = 1e-10);

struct WeierF {
  std::vector<cplx> f;
  // |d_zbar f / f + 2 g d_zbar gbar / (1 + |g|^2) - mu (A + iB)|, 0 where |f| < 1e-12
  std::vector<double> residual;
};
WeierF weier_f_from_g(const WeierstrassData &data, const HPotential &pot, double singular_tol = 1e-10);

// mu (A + iB) = -(i/4) fbar (mu1 nu1 (g^2 - 1) - i mu2 nu2 (g^2 + 1) + 2 mu3 nu3 g)
cplx mu_a_plus_ib(const HPotential &pot, cplx f, cplx g);

// xi(dx) = Re W, xi(dy) = Re(i W), W = (f (gbar^2 - 1) / 2, i f (gbar^2 + 1) / 2, f gbar).
LieValuedOneForm xi_from_weierstrass(const WeierstrassData &data);

// |g_zzbar - (R_g / R) g_z g_zbar - (R_gbar / R - conj(R_g) / conj(R)) |g_z|^2| per vertex
std::vector<double> gauss_map_pde_residual(const WeierstrassData &data, const HPotential &pot);

// Residuals of the two coordinate Dirac equations for [phi] = z1 + j z2, with
// g = i conj(z2) / z1 and f = -2 mu conj(z1)^2; mu taken from the grid.
std::vector<std::pair<double, double>> dirac_system_residual(const std::vector<cplx> &z1,
                                                             const std::vector<cplx> &z2,
                                                             const ParamGrid &grid,
                                                             const HPotential &pot);

// (g, f) of a spinor (z1, z2) and back.
std::pair<cplx, cplx> gauss_data_of_z(cplx z1, cplx z2, double mu);
std::pair<cplx, cplx> z_of_gauss_data(cplx g, cplx f, double mu);

// <Delta F, N> / (2 mu^2) at interior vertices (0 on the boundary), mu^2 = (|F_x|^2 + |F_y|^2) / 2.
std::vector<double> discrete_mean_curvature(const std::vector<Eigen::Vector3d> &F, const ParamGrid &grid,
                                            const std::vector<Eigen::Vector3d> &normal);

} // namespace spinorforge
