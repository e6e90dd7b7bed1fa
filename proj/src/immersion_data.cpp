#include "spinorforge/immersion_data.hpp"

#include "spinorforge/errors.hpp"
#include "spinorforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace spinorforge {

namespace {

Eigen::Matrix2d rotation_block(double w) {
  Eigen::Matrix2d W;
  W << 0, -w, w, 0;
  return W;
}

void for_rows(const ParamGrid &g, const std::function<void(int, int)> &body) {
  parallel_for(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) body(i, j);
  });
}

double max_abs(const std::vector<double> &v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Eigen::MatrixXd flat_to_matrix(const nlohmann::json &a, int r, int c) {
  if (!a.is_array() || static_cast<int>(a.size()) != r * c)
    throw InputError("expected an array of " + std::to_string(r * c) + " numbers");
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m(i, k) = a[i * c + k].get<double>();
  return m;
}

nlohmann::json matrix_to_flat(const Eigen::MatrixXd &m) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) a.push_back(m(i, k));
  return a;
}

} // namespace

Eigen::MatrixXd ImmersionData::normal_coeff(int v, int c) const {
  if (normal_connection.empty()) return Eigen::MatrixXd::Zero(q, q);
  return normal_connection[v][c];
}

double orthonormality_residual(const ImmersionData &d) {
  double r = 0;
  for (const auto &P : d.frame)
    r = std::max(r, (P * P.transpose() - Eigen::MatrixXd::Identity(d.n, d.n)).cwiseAbs().maxCoeff());
  return r;
}

void validate(const ImmersionData &d, double tol) {
  d.grid.validate();
  const int N = d.grid.size();
  if (d.q < 1 || d.n != d.q + 2) throw InputError("surface data needs n = q + 2 with q >= 1");
  if (static_cast<int>(d.frame.size()) != N || static_cast<int>(d.B.size()) != N)
    throw InputError("frame and B must have one entry per vertex");
  if (!d.normal_connection.empty() && static_cast<int>(d.normal_connection.size()) != N)
    throw InputError("normal connection must have one entry per vertex");
  if (!d.U.empty() && static_cast<int>(d.U.size()) != N)
    throw InputError("U must have one entry per vertex");
  for (int v = 0; v < N; ++v) {
    if (d.frame[v].rows() != d.n || d.frame[v].cols() != d.n)
      throw InputError("frame matrices must be n x n");
    if (static_cast<int>(d.B[v].size()) != d.q) throw InputError("B needs q components per vertex");
    for (const auto &b : d.B[v])
      if ((b - b.transpose()).cwiseAbs().maxCoeff() > tol) throw InputError("B is not symmetric");
    if (!d.normal_connection.empty())
      for (const auto &Nc : d.normal_connection[v]) {
        if (Nc.rows() != d.q || Nc.cols() != d.q) throw InputError("normal connection must be q x q");
        if ((Nc + Nc.transpose()).cwiseAbs().maxCoeff() > tol)
          throw InputError("normal connection is not skew");
      }
    if (!d.U.empty() && d.U[v].size() != d.n) throw InputError("U must have n components");
    if (!d.frame[v].allFinite()) throw InputError("non-finite frame entry");
  }
  double r = orthonormality_residual(d);
  if (r > tol) throw InputError("frame orthonormality residual " + std::to_string(r));
}

std::array<double, 2> tangent_connection(const ParamGrid &g, int i, int j) {
  if (g.mu.empty()) return {0.0, 0.0};
  auto mu = [&](int a, int b) { return g.mu[g.idx(a, b)]; };
  const double m = mu(i, j);
  return {-diff4(g, mu, 1, i, j) / m, diff4(g, mu, 0, i, j) / m};
}

std::vector<double> gauss_curvature(const ParamGrid &g) {
  std::vector<double> K(g.size(), 0.0);
  if (g.mu.empty()) return K;
  auto lm = [&](int a, int b) { return std::log(g.mu[g.idx(a, b)]); };
  for_rows(g, [&](int i, int j) {
    const double m = g.mu[g.idx(i, j)];
    K[g.idx(i, j)] = -(diff2_wide(g, lm, 0, i, j) + diff2_wide(g, lm, 1, i, j)) / (m * m);
  });
  return K;
}

Eigen::MatrixXd connection_matrix(const ImmersionData &d, int i, int j, int c) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d.n, d.n);
  C.topLeftCorner<2, 2>() = rotation_block(tangent_connection(d.grid, i, j)[c]);
  C.bottomRightCorner(d.q, d.q) = d.normal_coeff(d.grid.idx(i, j), c);
  return C;
}

Eigen::MatrixXd second_fundamental_operator(const ImmersionData &d, int v, int c) {
  const double mu = d.grid.conformal(v);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d.n, d.n);
  for (int r = 0; r < d.q; ++r)
    for (int b = 0; b < 2; ++b) {
      M(2 + r, b) = -mu * d.B[v][r](c, b);
      M(b, 2 + r) = mu * d.B[v][r](c, b);
    }
  return M;
}

Eigen::MatrixXd frame_gamma(const MetricLieAlgebra &alg, const Eigen::MatrixXd &frame,
                            const Eigen::VectorXd &X) {
  return frame.transpose() * alg.gamma_op(frame * X) * frame;
}

Eigen::MatrixXd frame_compat_matrix(const ImmersionData &d, const MetricLieAlgebra &alg, int i,
                                    int j, int c) {
  const int v = d.grid.idx(i, j);
  const double mu = d.grid.conformal(v);
  const Eigen::MatrixXd Pt = d.frame[v].transpose();
  Eigen::MatrixXd dPt = diff(
      d.grid, [&](int a, int b) -> Eigen::MatrixXd { return d.frame[d.grid.idx(a, b)].transpose(); },
      c, i, j);
  Eigen::VectorXd ec = Eigen::VectorXd::Unit(d.n, c);
  return (dPt + connection_matrix(d, i, j, c) * Pt - second_fundamental_operator(d, v, c) * Pt) / mu -
         Pt * alg.gamma_op(d.frame[v] * ec);
}

FrameCompatResiduals frame_compat_residuals(const ImmersionData &d, const MetricLieAlgebra &alg) {
  if (d.q != 1) throw InputError("frame equations are stated for hypersurfaces (q = 1)");
  if (alg.dim() != d.n) throw InputError("algebra dimension does not match the data");
  FrameCompatResiduals out;
  out.tangent.assign(d.grid.size(), 0.0);
  out.function.assign(d.grid.size(), 0.0);
  for_rows(d.grid, [&](int i, int j) {
    const int v = d.grid.idx(i, j);
    for (int c = 0; c < 2; ++c) {
      Eigen::MatrixXd R = frame_compat_matrix(d, alg, i, j, c);
      out.tangent[v] = std::max(out.tangent[v], R.topRows(2).cwiseAbs().maxCoeff());
      out.function[v] = std::max(out.function[v], R.bottomRows(d.q).cwiseAbs().maxCoeff());
    }
  });
  return out;
}

EKTData ekt_from_immersion(const ImmersionData &d, double kappa, double tau, int vertical) {
  if (d.n != 3 || d.q != 1) throw InputError("vertical field data needs a surface in dimension 3");
  if (vertical < 0 || vertical > 2) throw InputError("vertical index out of range");
  EKTData e;
  e.grid = d.grid;
  e.kappa = kappa;
  e.tau = tau;
  for (int v = 0; v < d.grid.size(); ++v) {
    e.T.push_back(d.frame[v].block<1, 2>(vertical, 0).transpose());
    e.f.push_back(d.frame[v](vertical, 2));
    e.S.push_back(d.S(v));
  }
  return e;
}

void validate(const EKTData &e, double tol) {
  e.grid.validate();
  const auto N = static_cast<std::size_t>(e.grid.size());
  if (e.T.size() != N || e.f.size() != N || e.S.size() != N)
    throw InputError("T, f and S must have one entry per vertex");
  for (std::size_t v = 0; v < N; ++v) {
    if (std::abs(e.T[v].squaredNorm() + e.f[v] * e.f[v] - 1) > tol)
      throw InputError("|T|^2 + f^2 != 1 at vertex " + std::to_string(v));
    if ((e.S[v] - e.S[v].transpose()).cwiseAbs().maxCoeff() > tol)
      throw InputError("S is not symmetric");
  }
}

EKTResiduals ekt_compat_residuals(const EKTData &e) {
  const ParamGrid &g = e.grid;
  EKTResiduals out;
  out.tangent.assign(g.size(), 0.0);
  out.function.assign(g.size(), 0.0);
  out.norm.assign(g.size(), 0.0);
  for_rows(g, [&](int i, int j) {
    const int v = g.idx(i, j);
    const double mu = g.conformal(v);
    const auto w = tangent_connection(g, i, j);
    const Eigen::Vector2d &T = e.T[v];
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector2d dT = diff(g, [&](int a, int b) -> Eigen::Vector2d { return e.T[g.idx(a, b)]; }, c, i, j);
      double df = diff(g, [&](int a, int b) { return e.f[g.idx(a, b)]; }, c, i, j);
      Eigen::Vector2d X = Eigen::Vector2d::Unit(c);
      Eigen::Vector2d JX(-X[1], X[0]);
      Eigen::Vector2d SX = e.S[v] * X - e.tau * JX;
      Eigen::Vector2d nablaT = (dT + rotation_block(w[c]) * T) / mu;
      out.tangent[v] = std::max(out.tangent[v], (nablaT - e.f[v] * SX).cwiseAbs().maxCoeff());
      out.function[v] = std::max(out.function[v], std::abs(df / mu + SX.dot(T)));
    }
    out.norm[v] = T.squaredNorm() + e.f[v] * e.f[v] - 1;
  });
  return out;
}

std::vector<double> daniel_gauss_residual(const EKTData &e) {
  std::vector<double> K = gauss_curvature(e.grid);
  std::vector<double> r(K.size());
  for (std::size_t v = 0; v < K.size(); ++v)
    r[v] = K[v] - e.S[v].determinant() - e.tau * e.tau -
           (e.kappa - 4 * e.tau * e.tau) * e.f[v] * e.f[v];
  return r;
}

std::vector<Eigen::Vector2d> daniel_codazzi_residual(const EKTData &e) {
  const ParamGrid &g = e.grid;
  std::vector<Eigen::Vector2d> r(g.size());
  for_rows(g, [&](int i, int j) {
    const int v = g.idx(i, j);
    const double mu = g.conformal(v);
    const auto w = tangent_connection(g, i, j);
    std::array<Eigen::Matrix2d, 2> nS;
    for (int c = 0; c < 2; ++c) {
      Eigen::Matrix2d dS = diff(g, [&](int a, int b) -> Eigen::Matrix2d { return e.S[g.idx(a, b)]; }, c, i, j);
      Eigen::Matrix2d W = rotation_block(w[c]);
      nS[c] = (dS + W * e.S[v] - e.S[v] * W) / mu;
    }
    const Eigen::Vector2d &T = e.T[v];
    r[v] = nS[0].col(1) - nS[1].col(0) -
           (e.kappa - 4 * e.tau * e.tau) * e.f[v] * Eigen::Vector2d(T[1], -T[0]);
  });
  return r;
}

Multivector gamma_tilde_general(const MetricLieAlgebra &alg, const Eigen::MatrixXd &T,
                                const Eigen::VectorXd &f, const Eigen::VectorXd &X) {
  const int n = alg.dim(), p = static_cast<int>(T.rows());
  if (p != n - 1 || T.cols() != n || f.size() != n || X.size() != p)
    throw InputError("gamma tilde needs T p x n, f of size n and X in R^p, p = n - 1");
  std::vector<Multivector> Tv;
  for (int i = 0; i < n; ++i) Tv.push_back(Multivector::vector(T.col(i)));
  Multivector out(p);
  for (int i = 0; i < n; ++i) {
    const double xi = X.dot(T.col(i));
    if (xi == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double gk = alg.gamma(i, j, k);
        if (gk == 0.0) continue;
        Multivector term = 0.5 * (Tv[j] * Tv[k] - Tv[k] * Tv[j]) + f[k] * Tv[j] - f[j] * Tv[k];
        out += (xi * gk) * term;
      }
  }
  return out;
}

Multivector gamma_tilde_dim3(const MetricLieAlgebra &alg, const Eigen::MatrixXd &T,
                             const Eigen::VectorXd &f, const Eigen::VectorXd &X) {
  if (alg.dim() != 3 || T.rows() != 2 || T.cols() != 3 || f.size() != 3 || X.size() != 2)
    throw InputError("the three-dimensional form needs n = 3");
  // (j, k, l, eps) with (j, k, l) a permutation of (0, 1, 2)
  static constexpr int perm[3][4] = {{0, 1, 2, 1}, {0, 2, 1, -1}, {1, 2, 0, 1}};
  const Multivector omega = Multivector::blade(2, 0b11);
  Multivector out(2);
  for (int i = 0; i < 3; ++i) {
    const double xi = X.dot(T.col(i));
    for (const auto &pk : perm) {
      const double gk = alg.gamma(i, pk[0], pk[1]);
      if (gk == 0.0 || xi == 0.0) continue;
      Multivector a = Multivector::scalar(2, f[pk[2]]) - Multivector::vector(T.col(pk[2]));
      out += (xi * gk * pk[3]) * (a * omega);
    }
  }
  return out;
}

Multivector gamma_tilde(const ImmersionData &d, const MetricLieAlgebra &alg,
                        const Eigen::Vector2d &X, int v, bool use_dim3) {
  if (d.q != 1) throw InputError("gamma tilde is defined for hypersurfaces (q = 1)");
  Eigen::MatrixXd T = d.frame[v].leftCols(2).transpose();
  Eigen::VectorXd f = d.frame[v].col(2);
  return use_dim3 ? gamma_tilde_dim3(alg, T, f, X) : gamma_tilde_general(alg, T, f, X);
}

Multivector ekt_gamma_bivector(const EKTData &e, const Eigen::Vector2d &X, int v) {
  if (e.tau == 0.0) throw InputError("tau = 0 leaves sigma = kappa / 2 tau undefined");
  const double sigma = e.kappa / (2 * e.tau);
  const Multivector nu = Multivector::basis(3, 2);
  const Multivector omega = Multivector::blade(3, 0b011);
  const Multivector T = Multivector::vector(Eigen::Vector3d(e.T[v][0], e.T[v][1], 0));
  const Multivector Xv = Multivector::vector(Eigen::Vector3d(X[0], X[1], 0));
  Multivector inner = (2 * e.tau - sigma) * X.dot(e.T[v]) * (T * nu - Multivector::scalar(3, e.f[v])) -
                      e.tau * (Xv * nu);
  return inner * omega;
}

double GCRResiduals::max_gauss() const { return max_abs(gauss); }

double GCRResiduals::max_codazzi() const {
  double m = 0;
  for (const auto &c : codazzi) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

double GCRResiduals::max_ricci() const {
  double m = 0;
  for (const auto &r : ricci) m = std::max(m, r.cwiseAbs().maxCoeff());
  return m;
}

GCRResiduals GCRResiduals::interior(const ParamGrid &g) const {
  GCRResiduals out = *this;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!g.interior(i, j)) {
        const int v = g.idx(i, j);
        out.gauss[v] = 0;
        out.codazzi[v].setZero();
        out.ricci[v].setZero();
      }
  return out;
}

GCRResiduals gcr_residuals(const ImmersionData &d, const MetricLieAlgebra &alg) {
  if (alg.dim() != d.n) throw InputError("algebra dimension does not match the data");
  const ParamGrid &g = d.grid;
  const int q = d.q;
  const std::vector<double> K = gauss_curvature(g);
  GCRResiduals out;
  out.gauss.assign(g.size(), 0.0);
  out.codazzi.assign(g.size(), Eigen::VectorXd::Zero(2 * q));
  out.ricci.assign(g.size(), Eigen::MatrixXd::Zero(q, q));
  for_rows(g, [&](int i, int j) {
    const int v = g.idx(i, j);
    const double mu = g.conformal(v);
    const Eigen::MatrixXd &P = d.frame[v];
    const Eigen::MatrixXd R = P.transpose() * curvature(alg, P.col(0), P.col(1)) * P;
    const auto &Bv = d.B[v];

    double b11b22 = 0, b12sq = 0;
    for (int r = 0; r < q; ++r) {
      b11b22 += Bv[r](0, 0) * Bv[r](1, 1);
      b12sq += Bv[r](0, 1) * Bv[r](0, 1);
    }
    out.gauss[v] = R(0, 1) - K[v] + b11b22 - b12sq;

    const auto w = tangent_connection(g, i, j);
    // (nabla~_{e_c} B)^r as 2x2 matrices
    std::array<std::vector<Eigen::Matrix2d>, 2> nB;
    for (int c = 0; c < 2; ++c) {
      const Eigen::Matrix2d W = rotation_block(w[c]);
      const Eigen::MatrixXd Nc = d.normal_coeff(v, c);
      for (int r = 0; r < q; ++r) {
        Eigen::Matrix2d dB = diff(
            g, [&](int a, int b) -> Eigen::Matrix2d { return d.B[g.idx(a, b)][r]; }, c, i, j);
        Eigen::Matrix2d t = dB - W.transpose() * Bv[r] - Bv[r] * W;
        for (int s = 0; s < q; ++s) t += Nc(r, s) * Bv[s];
        nB[c].push_back(t / mu);
      }
    }
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < q; ++r)
        out.codazzi[v][b * q + r] = R(2 + r, b) - (nB[0][r](1, b) - nB[1][r](0, b));

    if (!d.normal_connection.empty()) {
      auto Nc = [&](int c) {
        return [&, c](int a, int b) -> Eigen::MatrixXd { return d.normal_connection[g.idx(a, b)][c]; };
      };
      const Eigen::MatrixXd Nx = d.normal_coeff(v, 0), Ny = d.normal_coeff(v, 1);
      Eigen::MatrixXd RN = (diff(g, Nc(1), 0, i, j) - diff(g, Nc(0), 1, i, j) + Nx * Ny - Ny * Nx) /
                           (mu * mu);
      for (int r = 0; r < q; ++r)
        for (int s = 0; s < q; ++s) out.ricci[v](r, s) -= RN(s, r);
    }
    for (int r = 0; r < q; ++r)
      for (int s = 0; s < q; ++s) {
        double t = R(2 + s, 2 + r);
        for (int a = 0; a < 2; ++a) t += Bv[r](1, a) * Bv[s](0, a) - Bv[r](0, a) * Bv[s](1, a);
        out.ricci[v](r, s) += t;
      }
  });
  return out;
}

std::vector<Eigen::VectorXd> hn_u_field(const ImmersionData &d, const MetricLieAlgebra &alg) {
  if (!d.U.empty()) return d.U;
  Eigen::VectorXd l = alg.params().l;
  if (l.size() == 0) l = Eigen::VectorXd::Unit(alg.dim(), alg.dim() - 1);
  std::vector<Eigen::VectorXd> U;
  for (const auto &P : d.frame) U.push_back(P.transpose() * l);
  return U;
}

HnUResidual hn_u_residual(const ImmersionData &d, const MetricLieAlgebra &alg) {
  if (alg.tag() != GroupTag::Hn) throw InputError("the U equation is specific to hyperbolic space");
  if (alg.dim() != d.n) throw InputError("algebra dimension does not match the data");
  Eigen::VectorXd l = alg.params().l;
  if (l.size() == 0) l = Eigen::VectorXd::Unit(alg.dim(), alg.dim() - 1);
  const std::vector<Eigen::VectorXd> U = hn_u_field(d, alg);
  for (const auto &u : U)
    if (std::abs(u.norm() - l.norm()) > 1e-8) throw InputError("|U| differs from |l|");
  const ParamGrid &g = d.grid;
  const double l2 = l.squaredNorm();
  HnUResidual out;
  out.residual.assign(g.size(), 0.0);
  std::vector<double> dn(g.size(), 0.0);
  for_rows(g, [&](int i, int j) {
    const int v = g.idx(i, j);
    const double mu = g.conformal(v);
    const Eigen::VectorXd &u = U[v];
    for (int c = 0; c < 2; ++c) {
      auto getU = [&](int a, int b) -> Eigen::VectorXd { return U[g.idx(a, b)]; };
      Eigen::VectorXd r = (diff(g, getU, c, i, j) + connection_matrix(d, i, j, c) * u) / mu;
      Eigen::VectorXd X = Eigen::VectorXd::Unit(d.n, c);
      r += l2 * X - u[c] * u;
      for (int s = 0; s < d.q; ++s)
        for (int b = 0; b < 2; ++b) {
          r[2 + s] += d.B[v][s](c, b) * u[b];
          r[b] -= d.B[v][s](c, b) * u[2 + s];
        }
      out.residual[v] = std::max(out.residual[v], r.cwiseAbs().maxCoeff());
      auto n2 = [&](int a, int b) { return U[g.idx(a, b)].squaredNorm(); };
      dn[v] = std::max(dn[v], std::abs(diff(g, n2, c, i, j)) / mu);
    }
  });
  out.norm_derivative = max_abs(dn);
  return out;
}

nlohmann::json to_json(const ImmersionData &d) {
  nlohmann::json j;
  j["grid"] = to_json(d.grid);
  j["n"] = d.n;
  j["q"] = d.q;
  auto &fr = j["frame"] = nlohmann::json::array();
  auto &B = j["B"] = nlohmann::json::array();
  for (int v = 0; v < d.grid.size(); ++v) {
    fr.push_back(matrix_to_flat(d.frame[v]));
    nlohmann::json bv = nlohmann::json::array();
    for (const auto &b : d.B[v]) bv.push_back(matrix_to_flat(b));
    B.push_back(bv);
  }
  if (!d.normal_connection.empty()) {
    auto &nc = j["normal_connection"] = nlohmann::json::array();
    for (const auto &p : d.normal_connection)
      nc.push_back({matrix_to_flat(p[0]), matrix_to_flat(p[1])});
  }
  if (!d.U.empty()) {
    auto &u = j["U"] = nlohmann::json::array();
    for (const auto &x : d.U) u.push_back(matrix_to_flat(x));
  }
  return j;
}

ImmersionData immersion_from_json(const nlohmann::json &j) {
  try {
    ImmersionData d;
    d.grid = grid_from_json(j.at("grid"));
    d.n = j.at("n").get<int>();
    d.q = j.value("q", d.n - 2);
    if (d.q < 1 || d.n != d.q + 2) throw InputError("surface data needs n = q + 2 with q >= 1");
    const auto &fr = j.at("frame");
    const auto &B = j.at("B");
    if (!fr.is_array() || !B.is_array() || static_cast<int>(fr.size()) != d.grid.size() ||
        static_cast<int>(B.size()) != d.grid.size())
      throw InputError("frame and B must have one entry per vertex");
    for (int v = 0; v < d.grid.size(); ++v) {
      d.frame.push_back(flat_to_matrix(fr[v], d.n, d.n));
      std::vector<Eigen::Matrix2d> bv;
      if (!B[v].is_array() || static_cast<int>(B[v].size()) != d.q)
        throw InputError("B needs q components per vertex");
      for (const auto &b : B[v]) bv.push_back(flat_to_matrix(b, 2, 2));
      d.B.push_back(bv);
    }
    if (j.contains("normal_connection")) {
      const auto &nc = j["normal_connection"];
      if (!nc.is_array() || static_cast<int>(nc.size()) != d.grid.size())
        throw InputError("normal connection must have one entry per vertex");
      for (const auto &p : nc)
        d.normal_connection.push_back({flat_to_matrix(p.at(0), d.q, d.q), flat_to_matrix(p.at(1), d.q, d.q)});
    }
    if (j.contains("U")) {
      const auto &u = j["U"];
      if (!u.is_array() || static_cast<int>(u.size()) != d.grid.size())
        throw InputError("U must have one entry per vertex");
      for (const auto &x : u) d.U.push_back(flat_to_matrix(x, d.n, 1).col(0));
    }
    validate(d);
    return d;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("immersion json: ") + e.what());
  }
}

ResidualSummary summarize(const std::vector<double> &field) {
  ResidualSummary s;
  if (field.empty()) return s;
  double sum = 0;
  for (double x : field) {
    s.max = std::max(s.max, std::abs(x));
    sum += std::abs(x);
  }
  s.mean = sum / static_cast<double>(field.size());
  return s;
}

} // namespace spinorforge
