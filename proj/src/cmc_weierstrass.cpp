#include "spinorforge/cmc_weierstrass.hpp"

#include "spinorforge/errors.hpp"
#include "spinorforge/parallel.hpp"

#include <cmath>
#include <string>

namespace spinorforge {

namespace {

const cplx I(0, 1);

// d/dz and d/dzbar by central differences
template <class Get>
cplx d_z(const ParamGrid &g, Get get, int i, int j) {
  return 0.5 * (diff(g, get, 0, i, j) - I * diff(g, get, 1, i, j));
}

template <class Get>
cplx d_zbar(const ParamGrid &g, Get get, int i, int j) {
  return 0.5 * (diff(g, get, 0, i, j) + I * diff(g, get, 1, i, j));
}

void check_sizes(const WeierstrassData &d) {
  d.grid.validate();
  if (static_cast<int>(d.g.size()) != d.grid.size()) throw InputError("Gauss map has the wrong number of samples");
}

cplx potential_checked(const HPotential &pot, cplx g, double tol, int v) {
  const cplx R = h_potential(pot, g);
  if (!(std::abs(R) >= tol)) throw NumericalError("H-potential vanishes at vertex " + std::to_string(v));
  return R;
}

} // namespace

cplx h_potential(const HPotential &pot, cplx g) {
  const double n = std::norm(g);
  const double s = pot.mu[0] * std::norm(1.0 - g * g) + pot.mu[1] * std::norm(1.0 + g * g) + 4 * pot.mu[2] * n;
  return pot.H * (1 + n) * (1 + n) - 0.5 * I * s;
}

std::pair<cplx, cplx> h_potential_wirtinger(const HPotential &pot, cplx g) {
  const cplx gb = std::conj(g);
  const double n = std::norm(g);
  const cplx Rg = 2 * pot.H * (1 + n) * gb -
                  0.5 * I * (-2.0 * pot.mu[0] * g * (1.0 - gb * gb) + 2.0 * pot.mu[1] * g * (1.0 + gb * gb) + 4 * pot.mu[2] * gb);
  const cplx Rgb = 2 * pot.H * (1 + n) * g -
                   0.5 * I * (-2.0 * pot.mu[0] * gb * (1.0 - g * g) + 2.0 * pot.mu[1] * gb * (1.0 + g * g) + 4 * pot.mu[2] * g);
  return {Rg, Rgb};
}

cplx stereographic(const Eigen::Vector3d &nu) {
  if (!(1 + nu[2] > 1e-14)) throw InputError("the south pole has no stereographic image");
  return cplx(nu[0], nu[1]) / (1 + nu[2]);
}

Eigen::Vector3d inverse_stereographic(cplx g) {
  const double n = std::norm(g);
  return Eigen::Vector3d(2 * g.real(), 2 * g.imag(), 1 - n) / (1 + n);
}

HPotential potential_of(const MetricLieAlgebra &alg, double H) {
  if (alg.dim() != 3) throw InputError("the H-potential needs a 3-dimensional algebra");
  HPotential pot;
  pot.H = H;
  pot.mu << alg.gamma_op(Eigen::Vector3d::UnitX())(2, 1), alg.gamma_op(Eigen::Vector3d::UnitY())(0, 2),
      alg.gamma_op(Eigen::Vector3d::UnitZ())(1, 0);
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    expected(b, a) = pot.mu[k];
    expected(a, b) = -pot.mu[k];
    if ((alg.gamma_op(Eigen::Vector3d::Unit(k)) - expected).cwiseAbs().maxCoeff() > 1e-12)
      throw InputError("the algebra is not unimodular in its given basis");
  }
  return pot;
}

WeierstrassData weierstrass_from_g(const ParamGrid &grid, std::vector<cplx> g, const HPotential &pot,
                                   double singular_tol) {
  WeierstrassData d;
  d.grid = grid;
  d.grid.mu.clear();
  d.g = std::move(g);
  check_sizes(d);
  d.nu.resize(d.g.size());
  const double pole = std::cos(1e-3);
  for (std::size_t v = 0; v < d.g.size(); ++v) {
    if (!std::isfinite(d.g[v].real()) || !std::isfinite(d.g[v].imag()))
      throw InputError("Gauss map is infinite at vertex " + std::to_string(v));
    d.nu[v] = inverse_stereographic(d.g[v]);
    if (-d.nu[v][2] > pole) throw InputError("Gauss map reaches the south pole at vertex " + std::to_string(v));
  }
  WeierF wf = weier_f_from_g(d, pot, singular_tol);
  d.f = std::move(wf.f);
  d.grid.mu.resize(d.g.size());
  for (std::size_t v = 0; v < d.g.size(); ++v) d.grid.mu[v] = 0.5 * std::abs(d.f[v]) * (1 + std::norm(d.g[v]));
  return d;
}

cplx mu_a_plus_ib(const HPotential &pot, cplx f, cplx g) {
  const Eigen::Vector3d nu = inverse_stereographic(g);
  const cplx g2 = g * g;
  return -0.25 * I * std::conj(f) *
         (pot.mu[0] * nu[0] * (g2 - 1.0) - I * pot.mu[1] * nu[1] * (g2 + 1.0) + 2 * pot.mu[2] * nu[2] * g);
}

WeierF weier_f_from_g(const WeierstrassData &data, const HPotential &pot, double singular_tol) {
  check_sizes(data);
  const ParamGrid &G = data.grid;
  WeierF out;
  out.f.resize(G.size());
  out.residual.assign(G.size(), 0.0);
  auto gat = [&](int a, int b) { return data.g[G.idx(a, b)]; };
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const int v = G.idx(i, j);
      out.f[v] = 4.0 * d_z(G, gat, i, j) / potential_checked(pot, data.g[v], singular_tol, v);
    }
  auto fat = [&](int a, int b) { return out.f[G.idx(a, b)]; };
  auto gbar = [&](int a, int b) { return std::conj(data.g[G.idx(a, b)]); };
  parallel_for(G.ny, [&](int j) {
    for (int i = 0; i < G.nx; ++i) {
      const int v = G.idx(i, j);
      const cplx f = out.f[v], g = data.g[v];
      if (std::abs(f) < 1e-12) continue;
      const cplx r = d_zbar(G, fat, i, j) / f + 2.0 * g * d_zbar(G, gbar, i, j) / (1 + std::norm(g)) -
                     mu_a_plus_ib(pot, f, g);
      out.residual[v] = std::abs(r);
    }
  });
  return out;
}

LieValuedOneForm xi_from_weierstrass(const WeierstrassData &data) {
  const ParamGrid &G = data.grid;
  if (static_cast<int>(data.f.size()) != G.size()) throw InputError("Weierstrass density is missing");
  LieValuedOneForm xi{G, std::vector<Eigen::VectorXd>(G.size()), std::vector<Eigen::VectorXd>(G.size())};
  for (int v = 0; v < G.size(); ++v) {
    const cplx f = data.f[v], gb = std::conj(data.g[v]);
    const cplx W[3] = {0.5 * f * (gb * gb - 1.0), 0.5 * I * f * (gb * gb + 1.0), f * gb};
    xi.dx[v] = Eigen::Vector3d(W[0].real(), W[1].real(), W[2].real());
    xi.dy[v] = Eigen::Vector3d((I * W[0]).real(), (I * W[1]).real(), (I * W[2]).real());
  }
  return xi;
}

std::vector<double> gauss_map_pde_residual(const WeierstrassData &data, const HPotential &pot) {
  check_sizes(data);
  const ParamGrid &G = data.grid;
  std::vector<double> r(G.size(), 0.0);
  auto gat = [&](int a, int b) { return data.g[G.idx(a, b)]; };
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      const int v = G.idx(i, j);
      const cplx g = data.g[v];
      const cplx R = potential_checked(pot, g, 1e-12, v);
      auto [Rg, Rgb] = h_potential_wirtinger(pot, g);
      const cplx gz = d_z(G, gat, i, j), gzb = d_zbar(G, gat, i, j);
      const cplx lap = 0.25 * (diff2(G, gat, 0, i, j) + diff2(G, gat, 1, i, j));
      const cplx res = lap - Rg / R * gz * gzb - (Rgb / R - std::conj(Rg) / std::conj(R)) * std::norm(gz);
      r[v] = std::abs(res);
    }
  return r;
}

std::pair<cplx, cplx> gauss_data_of_z(cplx z1, cplx z2, double mu) {
  if (std::abs(z1) < 1e-300) throw InputError("z1 vanishes: the Gauss map is at the south pole");
  return {I * std::conj(z2) / z1, -2.0 * mu * std::conj(z1 * z1)};
}

std::pair<cplx, cplx> z_of_gauss_data(cplx g, cplx f, double mu) {
  if (!(mu > 0)) throw InputError("conformal factor must be positive");
  const cplx z1 = std::conj(std::sqrt(-f / (2 * mu)));
  return {z1, I * std::conj(g) * std::conj(z1)};
}

std::vector<std::pair<double, double>> dirac_system_residual(const std::vector<cplx> &z1,
                                                             const std::vector<cplx> &z2,
                                                             const ParamGrid &grid,
                                                             const HPotential &pot) {
  grid.validate();
  if (static_cast<int>(z1.size()) != grid.size() || static_cast<int>(z2.size()) != grid.size())
    throw InputError("spinor components have the wrong number of samples");
  std::vector<std::pair<double, double>> r(grid.size());
  auto sq = [&](int a, int b) { return std::sqrt(grid.conformal(grid.idx(a, b))); };
  auto w1 = [&](int a, int b) { return sq(a, b) * std::conj(z1[grid.idx(a, b)]); };
  auto w2 = [&](int a, int b) { return sq(a, b) * z2[grid.idx(a, b)]; };
  parallel_for(grid.ny, [&](int j) {
    for (int i = 0; i < grid.nx; ++i) {
      const int v = grid.idx(i, j);
      const double mu = grid.conformal(v);
      auto [g, f] = gauss_data_of_z(z1[v], z2[v], mu);
      const double s = 1 + std::norm(g);
      const cplx Rb = std::conj(h_potential(pot, g)) / (s * s);
      const cplx AB = mu_a_plus_ib(pot, f, g) / mu;
      const cplx r1 = d_zbar(grid, w1, i, j) / std::sqrt(mu) - 0.5 * I * mu * Rb * std::conj(z2[v]) -
                      0.5 * mu * AB * std::conj(z1[v]);
      const cplx r2 = d_zbar(grid, w2, i, j) / std::sqrt(mu) + 0.5 * I * mu * Rb * z1[v] - 0.5 * mu * AB * z2[v];
      r[v] = {std::abs(r1), std::abs(r2)};
    }
  });
  return r;
}

std::vector<double> discrete_mean_curvature(const std::vector<Eigen::Vector3d> &F, const ParamGrid &grid,
                                            const std::vector<Eigen::Vector3d> &normal) {
  grid.validate();
  if (static_cast<int>(F.size()) != grid.size() || static_cast<int>(normal.size()) != grid.size())
    throw InputError("mesh and normals must match the grid");
  std::vector<double> H(grid.size(), 0.0);
  auto at = [&](int a, int b) -> Eigen::Vector3d { return F[grid.idx(a, b)]; };
  for (int j = 1; j + 1 < grid.ny; ++j)
    for (int i = 1; i + 1 < grid.nx; ++i) {
      const int v = grid.idx(i, j);
      const Eigen::Vector3d lap = diff2(grid, at, 0, i, j) + diff2(grid, at, 1, i, j);
      const double mu2 = 0.5 * (diff(grid, at, 0, i, j).squaredNorm() + diff(grid, at, 1, i, j).squaredNorm());
      H[v] = lap.dot(normal[v]) / (2 * mu2);
    }
  return H;
}

} // namespace spinorforge
