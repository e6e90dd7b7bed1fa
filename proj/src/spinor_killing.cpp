#include "spinorforge/spinor_killing.hpp"

#include "spinorforge/errors.hpp"
#include "spinorforge/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace spinorforge {

namespace {

Eigen::MatrixXd antisym(const Eigen::MatrixXd &m) { return 0.5 * (m - m.transpose()); }

Eigen::Vector4d qmul(const Eigen::Vector4d &a, const Eigen::Vector4d &b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

const Eigen::Vector4d qi(0, 1, 0, 0), qj(0, 0, 1, 0);

Multivector base_of(const KillingProblem &p) {
  if (p.base_spinor.size() == 0) return Multivector::scalar(p.data.n, 1.0);
  if (p.base_spinor.dim() != p.data.n) throw InputError("base spinor has the wrong dimension");
  if (!is_spin(p.base_spinor, 1e-8)) throw InputError("base spinor is not in Spin(n)");
  return p.base_spinor;
}

void check_problem(const KillingProblem &p) {
  if (p.alg.dim() != p.data.n) throw InputError("algebra dimension does not match the data");
  validate(p.data);
}

// Lagrange weights for the value halfway between nodes k and k+1 on a line of m nodes.
template <class Get>
Multivector midpoint(Get at, int k, int m) {
  if (m < 4) return 0.5 * (at(k) + at(k + 1));
  if (k == 0) return (5.0 * at(0) + 15.0 * at(1) - 5.0 * at(2) + at(3)) * (1.0 / 16);
  if (k == m - 2)
    return (at(m - 4) - 5.0 * at(m - 3) + 15.0 * at(m - 2) + 5.0 * at(m - 1)) * (1.0 / 16);
  return (9.0 * (at(k) + at(k + 1)) - at(k - 1) - at(k + 2)) * (1.0 / 16);
}

// RK4 for phi' = b(t) phi over a step of signed length s, generator values at start, middle, end.
Multivector rk4(const Multivector &phi, const Multivector &b0, const Multivector &bm,
                const Multivector &b1, double s) {
  Multivector k1 = b0 * phi;
  Multivector k2 = bm * (phi + (0.5 * s) * k1);
  Multivector k3 = bm * (phi + (0.5 * s) * k2);
  Multivector k4 = b1 * (phi + s * k3);
  return phi + (s / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Generators {
  const ParamGrid &g;
  std::vector<std::array<Multivector, 2>> b;

  const Multivector &at(int i, int j, int c) const { return b[g.idx(i, j)][c]; }

  // step from (i, j) to the neighbour along direction c, sign +1 forward, -1 backward
  Multivector step(const Multivector &phi, int i, int j, int c, int sign) const {
    const int ni = c == 0 ? i + sign : i, nj = c == 1 ? j + sign : j;
    const int lo = std::min(c == 0 ? i : j, c == 0 ? ni : nj);
    const int m = c == 0 ? g.nx : g.ny;
    auto line = [&](int k) -> const Multivector & { return c == 0 ? at(k, j, 0) : at(i, k, 1); };
    Multivector mid = midpoint(line, lo, m);
    return rk4(phi, at(i, j, c), mid, at(ni, nj, c), sign * g.h);
  }

  // link variable: constant generator averaged over the edge
  Multivector link(const Multivector &phi, int i, int j, int c, int sign) const {
    const int ni = c == 0 ? i + sign : i, nj = c == 1 ? j + sign : j;
    const Multivector b = 0.5 * (at(i, j, c) + at(ni, nj, c));
    return rk4(phi, b, b, b, sign * g.h);
  }
};

Generators generators(const KillingProblem &p) {
  Generators G{p.data.grid, {}};
  G.b.resize(p.data.grid.size());
  parallel_for(p.data.grid.ny, [&](int j) {
    for (int i = 0; i < p.data.grid.nx; ++i) {
      const int v = p.data.grid.idx(i, j);
      for (int c = 0; c < 2; ++c) G.b[v][c] = transport_generator(p, i, j, c);
    }
  });
  return G;
}

double default_threshold(const ParamGrid &g, double t) { return t > 0 ? t : 10 * g.h * g.h; }

Eigen::VectorXd unit(int n, int k) { return Eigen::VectorXd::Unit(n, k); }

} // namespace

KillingProblem make_problem(ImmersionData data, MetricLieAlgebra alg) {
  return {std::move(data), std::move(alg), Multivector()};
}

Multivector killing_rhs(const KillingProblem &p, const Multivector &phi, const Eigen::Vector2d &X,
                        int v) {
  const ImmersionData &d = p.data;
  Eigen::VectorXd Xn = Eigen::VectorXd::Zero(d.n);
  Xn.head<2>() = X;
  Eigen::MatrixXd M = frame_gamma(p.alg, d.frame[v], Xn);
  for (int r = 0; r < d.q; ++r)
    for (int b = 0; b < 2; ++b) {
      const double Bxb = X.dot(d.B[v][r].col(b));
      M(2 + r, b) -= Bxb;
      M(b, 2 + r) += Bxb;
    }
  return 0.5 * bivector_of_skew(antisym(M)) * phi;
}

Multivector transport_generator(const KillingProblem &p, int i, int j, int c) {
  const ImmersionData &d = p.data;
  const int v = d.grid.idx(i, j);
  const double mu = d.grid.conformal(v);
  Eigen::MatrixXd M = mu * frame_gamma(p.alg, d.frame[v], unit(d.n, c)) +
                      second_fundamental_operator(d, v, c) - connection_matrix(d, i, j, c);
  return 0.5 * bivector_of_skew(antisym(M));
}

HolonomyReport plaquette_holonomy(const KillingProblem &p, const SpinorField &field,
                                  double threshold) {
  const ParamGrid &g = p.data.grid;
  Generators G = generators(p);
  HolonomyReport rep;
  rep.threshold = default_threshold(g, threshold);
  const int cx = g.nx - 1, cy = g.ny - 1;
  rep.plaquette.assign(cx * cy, 0.0);
  // cells touching the boundary see one-sided stencils; skip them when the grid allows
  const int m = (cx >= 3 && cy >= 3) ? 1 : 0;
  parallel_for(cy, [&](int j) {
    if (j < m || j >= cy - m) return;
    for (int i = m; i < cx - m; ++i) {
      const Multivector &phi0 = field.phi[g.idx(i, j)];
      Multivector phi = G.link(phi0, i, j, 0, +1);
      phi = G.link(phi, i + 1, j, 1, +1);
      phi = G.link(phi, i + 1, j + 1, 0, -1);
      phi = G.link(phi, i, j + 1, 1, -1);
      rep.plaquette[j * cx + i] = distance(phi, phi0) / (g.h * g.h);
    }
  });
  for (double x : rep.plaquette) rep.max = std::max(rep.max, x);
  rep.integrable = rep.max <= rep.threshold;
  return rep;
}

KillingSolution solve_killing(const KillingProblem &p, double threshold) {
  check_problem(p);
  const ParamGrid &g = p.data.grid;
  Generators G = generators(p);
  KillingSolution sol;
  sol.field.grid = g;
  sol.field.n = p.data.n;
  sol.field.phi.assign(g.size(), Multivector());
  sol.field.phi[0] = base_of(p);
  std::vector<double> drift(g.nx, 0.0);
  for (int i = 0; i + 1 < g.nx; ++i) {
    Multivector next = G.step(sol.field.phi[g.idx(i, 0)], i, 0, 0, +1);
    drift[0] = std::max(drift[0], renormalize_spin(next));
    sol.field.phi[g.idx(i + 1, 0)] = next;
  }
  parallel_for(g.nx, [&](int i) {
    double dmax = 0;
    for (int j = 0; j + 1 < g.ny; ++j) {
      Multivector next = G.step(sol.field.phi[g.idx(i, j)], i, j, 1, +1);
      dmax = std::max(dmax, renormalize_spin(next));
      sol.field.phi[g.idx(i, j + 1)] = next;
    }
    drift[i] = std::max(drift[i], dmax);
  });
  for (double x : drift) sol.max_renormalization = std::max(sol.max_renormalization, x);
  sol.holonomy = plaquette_holonomy(p, sol.field, threshold);
  return sol;
}

std::vector<double> killing_residual(const SpinorField &field, const KillingProblem &p) {
  const ParamGrid &g = p.data.grid;
  std::vector<double> r(g.size(), 0.0);
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      for (int c = 0; c < 2; ++c) {
        Multivector d = diff(g, [&](int a, int b) { return field.phi[g.idx(a, b)]; }, c, i, j);
        Multivector res = d - transport_generator(p, i, j, c) * field.phi[v];
        r[v] = std::max(r[v], res.max_abs() / g.conformal(v));
      }
    }
  });
  return r;
}

Eigen::VectorXd xi_value(const Multivector &phi, const Eigen::VectorXd &X, double tol) {
  Multivector x = reversal(phi) * Multivector::vector(X) * phi;
  if (x.off_grade(1) > tol * std::max(1.0, X.norm()))
    throw NumericalError("xi is not a vector: spinor field is corrupted");
  return x.vector_part();
}

LieValuedOneForm xi_from_spinor(const SpinorField &field, const KillingProblem &p) {
  const ParamGrid &g = p.data.grid;
  LieValuedOneForm xi{g, std::vector<Eigen::VectorXd>(g.size()), std::vector<Eigen::VectorXd>(g.size())};
  for (int v = 0; v < g.size(); ++v) {
    const double mu = g.conformal(v);
    xi.dx[v] = mu * xi_value(field.phi[v], unit(field.n, 0), 1e-8);
    xi.dy[v] = mu * xi_value(field.phi[v], unit(field.n, 1), 1e-8);
  }
  return xi;
}

Multivector normalizing_factor(const SpinorField &field, const KillingProblem &p) {
  const int n = field.n;
  const Eigen::MatrixXd &P = p.data.frame[0];
  Eigen::MatrixXd T(n, n);
  for (int i = 0; i < n; ++i) T.col(i) = xi_value(field.phi[0], P.row(i).transpose(), 1e-8);
  if ((T.transpose() * T - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8)
    throw NumericalError("xi at the base vertex is not orthogonal");
  // project away rounding before lifting
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return canonical_sign(spin_lift(svd.matrixU() * svd.matrixV().transpose()));
}

SpinorField normalize_spinor(const SpinorField &field, const KillingProblem &p) {
  const Multivector a = normalizing_factor(field, p);
  SpinorField out = field;
  for (auto &x : out.phi) x = x * a;
  return out;
}

void immersion_errors(const std::vector<GroupElement> &F, const SpinorField &field,
                      const KillingProblem &p, ReconstructReport &out) {
  const ImmersionData &d = p.data;
  const ParamGrid &g = d.grid;
  LieValuedOneForm z = pullback_one_form(F, g, p.alg);
  std::vector<double> iso(g.size(), 0), sff(g.size(), 0), nc(g.size(), 0);
  std::vector<std::vector<Eigen::VectorXd>> nu(g.size());
  for (int v = 0; v < g.size(); ++v)
    for (int r = 0; r < d.q; ++r) nu[v].push_back(xi_value(field.phi[v], unit(d.n, 2 + r), 1e-8));
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      const double mu = g.conformal(v), mu2 = mu * mu;
      const Eigen::VectorXd za[2] = {z.dx[v], z.dy[v]};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          iso[v] = std::max(iso[v], std::abs(za[a].dot(za[b]) / mu2 - (a == b ? 1.0 : 0.0)));
      // D_a z_b = d_a z_b + Gamma(z_a) z_b
      Eigen::VectorXd Dz[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const auto &field_b = b == 0 ? z.dx : z.dy;
          Dz[a][b] = diff(g, [&](int s, int t) -> Eigen::VectorXd { return field_b[g.idx(s, t)]; }, a, i, j) +
                     p.alg.gamma_op(za[a]) * za[b];
        }
      for (int r = 0; r < d.q; ++r)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const double bf = 0.5 * (Dz[a][b] + Dz[b][a]).dot(nu[v][r]) / mu2;
            sff[v] = std::max(sff[v], std::abs(bf - d.B[v][r](a, b)));
          }
      if (d.q > 1)
        for (int c = 0; c < 2; ++c) {
          const Eigen::MatrixXd N = d.normal_coeff(v, c);
          for (int s = 0; s < d.q; ++s) {
            Eigen::VectorXd Dn = diff(g, [&](int a, int b) -> Eigen::VectorXd { return nu[g.idx(a, b)][s]; }, c, i, j) +
                                 p.alg.gamma_op(za[c]) * nu[v][s];
            for (int r = 0; r < d.q; ++r) nc[v] = std::max(nc[v], std::abs(Dn.dot(nu[v][r]) - N(r, s)));
          }
        }
    }
  });
  out.isometry_error = summarize(iso).max;
  out.sff_error = summarize(sff).max;
  out.normal_connection_error = summarize(nc).max;
}

ReconstructReport reconstruct_immersion(const KillingProblem &p, const ReconstructOptions &opt) {
  ReconstructReport out;
  out.solution = solve_killing(p, opt.holonomy_threshold);
  out.integrable = out.solution.holonomy.integrable;
  SpinorField phi = normalize_spinor(out.solution.field, p);
  out.solution.field = phi;
  LieValuedOneForm xi = xi_from_spinor(phi, p);
  const ParamGrid &g = p.data.grid;
  std::vector<double> sr = structure_residual(xi, p.alg);
  out.structure_residual = summarize(sr).max;
  out.structure_ok = out.structure_residual <= default_threshold(g, opt.structure_tolerance);
  DarbouxResult dr = darboux_integrate(xi, p.alg, group_identity(p.alg));
  out.F = std::move(dr.F);
  out.max_renormalization = std::max(out.solution.max_renormalization, dr.max_renormalization);
  immersion_errors(out.F, phi, p, out);
  return out;
}

SpinorOfImmersion spinor_of_immersion(const std::vector<GroupElement> &F, const ParamGrid &grid,
                                      const MetricLieAlgebra &alg, double conformal_tol) {
  const int n = alg.dim(), q = n - 2;
  if (q < 1) throw InputError("need an ambient dimension of at least 3");
  if (static_cast<int>(F.size()) != grid.size()) throw InputError("map has the wrong number of vertices");
  ParamGrid g = grid;
  g.mu.clear();
  LieValuedOneForm z = pullback_one_form(F, g, alg);
  SpinorOfImmersion out;
  ImmersionData &d = out.data;
  d.n = n;
  d.q = q;
  g.mu.resize(g.size());
  d.frame.resize(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      const Eigen::VectorXd &zx = z.dx[v], &zy = z.dy[v];
      const double mu2 = 0.5 * (zx.squaredNorm() + zy.squaredNorm());
      if (!(mu2 > 1e-24)) throw InputError("degenerate differential at vertex " + std::to_string(v));
      if (std::abs(zx.squaredNorm() - zy.squaredNorm()) / mu2 > conformal_tol ||
          std::abs(zx.dot(zy)) / mu2 > conformal_tol)
        throw InputError("map is not conformal at vertex " + std::to_string(v));
      g.mu[v] = std::sqrt(mu2);
      Eigen::MatrixXd P(n, n);
      P.col(0) = zx.normalized();
      P.col(1) = (zy - zy.dot(P.col(0)) * P.col(0)).normalized();
      // normals: continue the neighbour's normal frame, then fill from the standard basis
      std::vector<Eigen::VectorXd> cand;
      if (v > 0) {
        const Eigen::MatrixXd &Q = d.frame[i > 0 ? g.idx(i - 1, j) : g.idx(i, j - 1)];
        for (int r = 0; r < q; ++r) cand.push_back(Q.col(2 + r));
      }
      for (int k = 0; k < n; ++k) cand.push_back(unit(n, k));
      int filled = 2;
      for (const auto &c : cand) {
        if (filled == n) break;
        Eigen::VectorXd w = c;
        for (int s = 0; s < filled; ++s) w -= w.dot(P.col(s)) * P.col(s);
        for (int s = 0; s < filled; ++s) w -= w.dot(P.col(s)) * P.col(s);
        if (w.norm() < 1e-3) continue;
        P.col(filled++) = w.normalized();
      }
      if (P.determinant() < 0) P.col(n - 1) *= -1;
      d.frame[v] = P;
    }
  d.grid = g;
  d.B.assign(g.size(), std::vector<Eigen::Matrix2d>(q, Eigen::Matrix2d::Zero()));
  if (q > 1) d.normal_connection.assign(g.size(), {Eigen::MatrixXd::Zero(q, q), Eigen::MatrixXd::Zero(q, q)});
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      const double mu2 = g.mu[v] * g.mu[v];
      const Eigen::VectorXd za[2] = {z.dx[v], z.dy[v]};
      Eigen::VectorXd Dz[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const auto &fb = b == 0 ? z.dx : z.dy;
          Dz[a][b] = diff(g, [&](int s, int t) -> Eigen::VectorXd { return fb[g.idx(s, t)]; }, a, i, j) +
                     alg.gamma_op(za[a]) * za[b];
        }
      for (int r = 0; r < q; ++r) {
        const Eigen::VectorXd nr = d.frame[v].col(2 + r);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) d.B[v][r](a, b) = 0.5 * (Dz[a][b] + Dz[b][a]).dot(nr) / mu2;
      }
      if (q > 1)
        for (int c = 0; c < 2; ++c) {
          Eigen::MatrixXd N(q, q);
          for (int s = 0; s < q; ++s) {
            Eigen::VectorXd Dn =
                diff(g, [&](int a, int b) -> Eigen::VectorXd { return d.frame[g.idx(a, b)].col(2 + s); }, c, i, j) +
                alg.gamma_op(za[c]) * d.frame[v].col(2 + s);
            for (int r = 0; r < q; ++r) N(r, s) = Dn.dot(d.frame[v].col(2 + r));
          }
          d.normal_connection[v][c] = antisym(N);
        }
    }
  out.field.grid = g;
  out.field.n = n;
  out.field.phi.resize(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      Multivector a = spin_lift(d.frame[v].transpose());
      if (v == 0) {
        a = canonical_sign(a);
      } else {
        const Multivector &prev = out.field.phi[i > 0 ? g.idx(i - 1, j) : g.idx(i, j - 1)];
        double dot = 0;
        for (std::uint32_t k = 0; k < a.size(); ++k) dot += a[k] * prev[k];
        if (dot < 0) a *= -1.0;
      }
      out.field.phi[v] = a;
    }
  validate(d, 1e-8);
  return out;
}

std::vector<double> dirac_residual(const SpinorField &field, const KillingProblem &p,
                                   const std::vector<Eigen::VectorXd> &H) {
  const ImmersionData &d = p.data;
  const ParamGrid &g = d.grid;
  std::vector<double> r(g.size(), 0.0);
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      const double mu = g.conformal(v);
      const Multivector &phi = field.phi[v];
      Multivector lhs(d.n), gamma(d.n);
      for (int a = 0; a < 2; ++a) {
        const Multivector ea = Multivector::basis(d.n, a);
        Multivector dphi = diff(g, [&](int s, int t) { return field.phi[g.idx(s, t)]; }, a, i, j);
        Multivector nab = (dphi + 0.5 * bivector_of_skew(antisym(connection_matrix(d, i, j, a))) * phi) *
                          (1.0 / mu);
        lhs += ea * nab;
        gamma += ea * bivector_of_skew(antisym(frame_gamma(p.alg, d.frame[v], unit(d.n, a))));
      }
      gamma *= 0.5;
      Eigen::VectorXd Hn = Eigen::VectorXd::Zero(d.n);
      for (int s = 0; s < d.q; ++s)
        Hn[2 + s] = H.empty() ? 0.5 * d.B[v][s].trace() : H[v][s];
      Multivector res = lhs - (Multivector::vector(Hn) + gamma) * phi;
      r[v] = res.max_abs();
    }
  });
  return r;
}

std::pair<cplx, cplx> z_of_spinor(const Multivector &phi) {
  if (phi.dim() != 3) throw InputError("the (z1, z2) form needs n = 3");
  return {cplx(phi[0], phi[0b011]), cplx(phi[0b110], phi[0b101])};
}

Multivector spinor_of_z(cplx z1, cplx z2) {
  Multivector phi(3);
  phi[0] = z1.real();
  phi[0b011] = z1.imag();
  phi[0b110] = z2.real();
  phi[0b101] = z2.imag();
  return phi;
}

Eigen::Vector4d psi_of_z(cplx z1, cplx z2) {
  // z1 - j i z2 = z1 + k z2
  return {z1.real(), z1.imag(), z2.imag(), z2.real()};
}

Eigen::Vector3d xi_from_z(cplx z1, cplx z2, const Eigen::Vector3d &X) {
  const cplx I(0, 1);
  const cplx w = z1 * std::conj(z2);
  const double ipart = 2 * X[0] * w.imag() - 2 * X[1] * w.real() + X[2] * (std::norm(z1) - std::norm(z2));
  const cplx jpart = X[0] * (z1 * z1 + z2 * z2) - I * X[1] * (z1 * z1 - z2 * z2) - 2.0 * I * X[2] * z1 * z2;
  // j (a + i b) = a j - b k
  return {jpart.real(), -jpart.imag(), ipart};
}

std::vector<double> morel_residual(const SpinorField &field, const KillingProblem &p, double H) {
  if (field.n != 3) throw InputError("the Morel form needs n = 3");
  const ParamGrid &g = p.data.grid;
  std::vector<Eigen::Vector4d> psi(g.size());
  for (int v = 0; v < g.size(); ++v) {
    auto [z1, z2] = z_of_spinor(field.phi[v]);
    psi[v] = psi_of_z(z1, z2);
  }
  const Eigen::Vector4d jk = qmul(qj, qi); // [e2] = -ji
  std::vector<double> r(g.size(), 0.0);
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      const int v = g.idx(i, j);
      const double mu = g.conformal(v);
      const auto w = tangent_connection(g, i, j);
      auto get = [&](int a, int b) -> Eigen::Vector4d { return psi[g.idx(a, b)]; };
      Eigen::Vector4d nx = diff(g, get, 0, i, j) + 0.5 * w[0] * qmul(qi, psi[v]);
      Eigen::Vector4d ny = diff(g, get, 1, i, j) + 0.5 * w[1] * qmul(qi, psi[v]);
      Eigen::Vector4d D = (qmul(qj, nx) - qmul(jk, ny)) / mu;
      const Eigen::Vector4d &s = psi[v];
      Eigen::Vector4d bar(-s[0], -s[1], s[2], s[3]);
      Eigen::Vector4d res = D - H * s + qmul(bar, qi);
      r[v] = res.cwiseAbs().maxCoeff();
    }
  });
  return r;
}

} // namespace spinorforge
