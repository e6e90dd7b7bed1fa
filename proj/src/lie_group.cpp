#include "spinorforge/lie_group.hpp"
#include "spinorforge/errors.hpp"
#include "spinorforge/parallel.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinorforge {

namespace {

Eigen::Vector4d qmul(const Eigen::Vector4d &a, const Eigen::Vector4d &b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Eigen::Vector4d qconj(const Eigen::Vector4d &a) { return {a[0], -a[1], -a[2], -a[3]}; }

// algebra (e1, e2, e3) <-> imaginary quaternion (j, k, i)
Eigen::Vector4d imag_of(const Eigen::VectorXd &v) { return {0.0, v[2], v[0], v[1]}; }
Eigen::VectorXd alg_of(const Eigen::Vector4d &q) { return Eigen::Vector3d(q[2], q[3], q[1]); }

// Orthogonal Q with Q e_n = l / |l|, so that l o Q = |l| e_n^*.
Eigen::MatrixXd hyperbolic_rotation(const Eigen::VectorXd &l) {
  const int n = static_cast<int>(l.size());
  Eigen::VectorXd u = l / l.norm(), en = Eigen::VectorXd::Unit(n, n - 1);
  Eigen::VectorXd w = u - en;
  if (w.norm() < 1e-15) return Eigen::MatrixXd::Identity(n, n);
  w.normalize();
  return Eigen::MatrixXd::Identity(n, n) - 2.0 * w * w.transpose();
}

Eigen::Matrix2d exp_zA(const MetricLieAlgebra &alg, double z) {
  Eigen::Matrix2d m = z * alg.params().A;
  return m.exp();
}

void check_model(const MetricLieAlgebra &alg, const GroupElement &g) {
  if (g.model != model_of(alg)) throw InputError("group element belongs to a different model");
  if (g.p.size() != (g.model == GroupModel::Quaternion ? 4 : alg.dim()))
    throw InputError("group element payload has wrong length");
}

} // namespace

GroupModel model_of(const MetricLieAlgebra &alg) {
  switch (alg.tag()) {
  case GroupTag::Rn:
    return GroupModel::Abelian;
  case GroupTag::Hn:
    return GroupModel::Hyperbolic;
  case GroupTag::S3:
    return GroupModel::Quaternion;
  case GroupTag::SemiDirect:
  case GroupTag::Sol3:
  case GroupTag::H2xR:
    return GroupModel::SemiDirect;
  case GroupTag::Unimodular: {
    const Eigen::Vector3d &mu = alg.params().mu;
    if (mu.isZero(0)) return GroupModel::Abelian;
    if (mu == Eigen::Vector3d(1, 1, 1)) return GroupModel::Quaternion;
    break;
  }
  case GroupTag::EKappaTau:
    break;
  }
  throw InputError("no explicit group model for " + tag_name(alg.tag()));
}

GroupElement group_identity(const MetricLieAlgebra &alg) {
  GroupModel m = model_of(alg);
  switch (m) {
  case GroupModel::Quaternion:
    return {m, Eigen::Vector4d(1, 0, 0, 0)};
  case GroupModel::Hyperbolic: {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(alg.dim());
    p[alg.dim() - 1] = 1.0;
    return {m, p};
  }
  default:
    return {m, Eigen::VectorXd::Zero(alg.dim())};
  }
}

GroupElement group_multiply(const MetricLieAlgebra &alg, const GroupElement &a, const GroupElement &b) {
  check_model(alg, a);
  check_model(alg, b);
  const int n = alg.dim();
  GroupElement r{a.model, {}};
  switch (a.model) {
  case GroupModel::Abelian:
    r.p = a.p + b.p;
    break;
  case GroupModel::Hyperbolic: {
    double an = a.p[n - 1];
    r.p = an * b.p;
    r.p.head(n - 1) += a.p.head(n - 1);
    break;
  }
  case GroupModel::Quaternion:
    r.p = qmul(a.p, b.p);
    break;
  case GroupModel::SemiDirect:
    r.p.resize(3);
    r.p.head<2>() = a.p.head<2>() + exp_zA(alg, a.p[2]) * b.p.head<2>();
    r.p[2] = a.p[2] + b.p[2];
    break;
  }
  return r;
}

GroupElement group_inverse(const MetricLieAlgebra &alg, const GroupElement &a) {
  check_model(alg, a);
  const int n = alg.dim();
  GroupElement r{a.model, {}};
  switch (a.model) {
  case GroupModel::Abelian:
    r.p = -a.p;
    break;
  case GroupModel::Hyperbolic: {
    double an = a.p[n - 1];
    r.p.resize(n);
    r.p.head(n - 1) = -a.p.head(n - 1) / an;
    r.p[n - 1] = 1.0 / an;
    break;
  }
  case GroupModel::Quaternion:
    r.p = qconj(a.p) / a.p.squaredNorm();
    break;
  case GroupModel::SemiDirect:
    r.p.resize(3);
    r.p.head<2>() = -(exp_zA(alg, -a.p[2]) * a.p.head<2>());
    r.p[2] = -a.p[2];
    break;
  }
  return r;
}

GroupElement group_exp(const MetricLieAlgebra &alg, const Eigen::VectorXd &v, double t) {
  const int n = alg.dim();
  if (v.size() != n) throw InputError("algebra vector has wrong length");
  GroupModel m = model_of(alg);
  GroupElement r{m, {}};
  switch (m) {
  case GroupModel::Abelian:
    r.p = t * v;
    break;
  case GroupModel::Hyperbolic: {
    const Eigen::VectorXd &l = alg.params().l;
    double lam = l.norm();
    Eigen::VectorXd w = hyperbolic_rotation(l).transpose() * v;
    double s = lam * w[n - 1] * t;
    // (e^s - 1)/s, stable near 0
    double phi = std::abs(s) < 1e-8 ? 1.0 + s / 2 + s * s / 6 : std::expm1(s) / s;
    r.p.resize(n);
    r.p.head(n - 1) = w.head(n - 1) * t * phi;
    r.p[n - 1] = std::exp(s);
    break;
  }
  case GroupModel::Quaternion: {
    double a = v.norm() * t;
    Eigen::Vector4d q(std::cos(a), 0, 0, 0);
    if (a != 0.0) q += std::sin(a) / v.norm() * imag_of(v);
    r.p = q;
    break;
  }
  case GroupModel::SemiDirect: {
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    M.topLeftCorner<2, 2>() = v[2] * alg.params().A;
    M.topRightCorner<2, 1>() = v.head<2>();
    Eigen::Matrix3d E = (t * M).exp();
    r.p = Eigen::Vector3d(E(0, 2), E(1, 2), v[2] * t);
    break;
  }
  }
  return r;
}

Eigen::VectorXd maurer_cartan(const MetricLieAlgebra &alg, const GroupElement &g,
                              const Eigen::VectorXd &dg) {
  check_model(alg, g);
  const int n = alg.dim();
  switch (g.model) {
  case GroupModel::Abelian:
    return dg;
  case GroupModel::Hyperbolic: {
    const Eigen::VectorXd &l = alg.params().l;
    double an = g.p[n - 1];
    Eigen::VectorXd w = dg / an;
    w[n - 1] /= l.norm();
    return hyperbolic_rotation(l) * w;
  }
  case GroupModel::Quaternion:
    return alg_of(qmul(qconj(g.p), dg) / g.p.squaredNorm());
  case GroupModel::SemiDirect: {
    Eigen::VectorXd w(3);
    w.head<2>() = exp_zA(alg, -g.p[2]) * dg.head<2>();
    w[2] = dg[2];
    return w;
  }
  }
  return dg;
}

double group_distance(const GroupElement &a, const GroupElement &b) {
  if (a.model != b.model || a.p.size() != b.p.size()) return INFINITY;
  return (a.p - b.p).cwiseAbs().maxCoeff();
}

Eigen::Vector3d embed_r3(const GroupElement &g, const Eigen::Vector4d &pole) {
  if (g.model == GroupModel::Quaternion) {
    // rotate the pole to -1, then project from -1 onto the purely imaginary space
    Eigen::Vector4d q = -qmul(qconj(pole.normalized()), g.p.normalized());
    double den = 1.0 + q[0];
    if (den < 1e-12) throw NumericalError("point coincides with the projection pole");
    return Eigen::Vector3d(q[1], q[2], q[3]) / den;
  }
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (int i = 0; i < std::min<int>(3, static_cast<int>(g.p.size())); ++i) x[i] = g.p[i];
  return x;
}

namespace {

// Lagrange interpolation of nodal values vals[0..m) (spacing 1) at s in [k, k+1].
Eigen::VectorXd interp(const std::vector<Eigen::VectorXd> &vals, int k, double s) {
  const int m = static_cast<int>(vals.size());
  if (m < 4) {
    double t = s - k;
    return (1 - t) * vals[k] + t * vals[k + 1];
  }
  int lo = std::clamp(k - 1, 0, m - 4);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(vals[0].size());
  for (int a = lo; a < lo + 4; ++a) {
    double w = 1;
    for (int b = lo; b < lo + 4; ++b)
      if (b != a) w *= (s - b) / double(a - b);
    r += w * vals[a];
  }
  return r;
}

// Integrates F' = F xi(t) along a line of nodes, starting from F[0] = start.
std::vector<GroupElement> integrate_line(const std::vector<Eigen::VectorXd> &xi, double h,
                                         const MetricLieAlgebra &alg, GroupElement start,
                                         double &renorm) {
  std::vector<GroupElement> out;
  out.reserve(xi.size());
  out.push_back(start);
  const double g1 = 0.5 - std::sqrt(3.0) / 6.0, g2 = 0.5 + std::sqrt(3.0) / 6.0;
  for (int k = 0; k + 1 < static_cast<int>(xi.size()); ++k) {
    Eigen::VectorXd A1 = interp(xi, k, k + g1), A2 = interp(xi, k, k + g2);
    Eigen::VectorXd om = 0.5 * h * (A1 + A2) + std::sqrt(3.0) / 12.0 * h * h * alg.bracket(A1, A2);
    GroupElement next = group_multiply(alg, out.back(), group_exp(alg, om));
    if (next.model == GroupModel::Quaternion) {
      double nrm = next.p.norm();
      renorm = std::max(renorm, std::abs(nrm - 1.0));
      next.p /= nrm;
    }
    if (!next.p.allFinite())
      throw NumericalError("darboux integration diverged at step " + std::to_string(k));
    out.push_back(next);
  }
  return out;
}

DarbouxResult integrate_tree(const LieValuedOneForm &xi, const MetricLieAlgebra &alg,
                             const GroupElement &base, bool transposed) {
  const ParamGrid &g = xi.grid;
  if (static_cast<int>(xi.dx.size()) != g.size() || static_cast<int>(xi.dy.size()) != g.size())
    throw InputError("one-form does not match its grid");
  check_model(alg, base);
  DarbouxResult res;
  res.F.assign(g.size(), base);
  const int na = transposed ? g.ny : g.nx, nb = transposed ? g.nx : g.ny;
  auto vid = [&](int a, int b) { return transposed ? g.idx(b, a) : g.idx(a, b); };
  const auto &first = transposed ? xi.dy : xi.dx;
  const auto &second = transposed ? xi.dx : xi.dy;
  std::vector<Eigen::VectorXd> line(na);
  for (int a = 0; a < na; ++a) line[a] = first[vid(a, 0)];
  double r0 = 0;
  auto row = integrate_line(line, g.h, alg, base, r0);
  std::vector<double> renorm(na, 0.0);
  parallel_for(na, [&](int a) {
    std::vector<Eigen::VectorXd> col(nb);
    for (int b = 0; b < nb; ++b) col[b] = second[vid(a, b)];
    auto c = integrate_line(col, g.h, alg, row[a], renorm[a]);
    for (int b = 0; b < nb; ++b) res.F[vid(a, b)] = c[b];
  });
  res.max_renormalization = r0;
  for (double r : renorm) res.max_renormalization = std::max(res.max_renormalization, r);
  return res;
}

} // namespace

DarbouxResult darboux_integrate(const LieValuedOneForm &xi, const MetricLieAlgebra &alg,
                                const GroupElement &base) {
  return integrate_tree(xi, alg, base, false);
}

DarbouxResult darboux_integrate_transposed(const LieValuedOneForm &xi, const MetricLieAlgebra &alg,
                                           const GroupElement &base) {
  return integrate_tree(xi, alg, base, true);
}

std::vector<double> structure_residual(const LieValuedOneForm &xi, const MetricLieAlgebra &alg) {
  const ParamGrid &g = xi.grid;
  std::vector<double> r((g.nx - 1) * (g.ny - 1));
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      int a = g.idx(i, j), b = g.idx(i + 1, j), c = g.idx(i, j + 1), d = g.idx(i + 1, j + 1);
      Eigen::VectorXd dxy = ((xi.dy[b] - xi.dy[a]) + (xi.dy[d] - xi.dy[c])) / (2 * g.h);
      Eigen::VectorXd dyx = ((xi.dx[c] - xi.dx[a]) + (xi.dx[d] - xi.dx[b])) / (2 * g.h);
      Eigen::VectorXd mx = 0.25 * (xi.dx[a] + xi.dx[b] + xi.dx[c] + xi.dx[d]);
      Eigen::VectorXd my = 0.25 * (xi.dy[a] + xi.dy[b] + xi.dy[c] + xi.dy[d]);
      r[j * (g.nx - 1) + i] = (dxy - dyx + alg.bracket(mx, my)).norm();
    }
  return r;
}

LieValuedOneForm pullback_one_form(const std::vector<GroupElement> &F, const ParamGrid &grid,
                                   const MetricLieAlgebra &alg) {
  if (static_cast<int>(F.size()) != grid.size()) throw InputError("map does not match its grid");
  LieValuedOneForm w{grid, std::vector<Eigen::VectorXd>(grid.size()),
                     std::vector<Eigen::VectorXd>(grid.size())};
  auto get = [&](int i, int j) -> Eigen::VectorXd { return F[grid.idx(i, j)].p; };
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      int v = grid.idx(i, j);
      w.dx[v] = maurer_cartan(alg, F[v], diff4(grid, get, 0, i, j));
      w.dy[v] = maurer_cartan(alg, F[v], diff4(grid, get, 1, i, j));
    }
  return w;
}

} // namespace spinorforge
