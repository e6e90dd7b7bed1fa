#include "spinorforge/fixtures.hpp"

#include "spinorforge/errors.hpp"

#include <cmath>
#include <functional>

namespace spinorforge {

namespace {

ParamGrid square_grid(int N, double x0, double y0) {
  if (N < 1) throw InputError("fixture resolution must be positive");
  return ParamGrid(N + 1, N + 1, 1.0 / N, x0, y0);
}

// Fills mu, frame and B from per-point callbacks.
ImmersionData sample(ParamGrid g, int n, int q, const std::function<double(double, double)> &mu,
                     const std::function<Eigen::MatrixXd(double, double)> &frame,
                     const std::function<std::vector<Eigen::Matrix2d>(double, double)> &B) {
  ImmersionData d;
  d.n = n;
  d.q = q;
  g.mu.resize(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      g.mu[g.idx(i, j)] = mu(x, y);
      d.frame.push_back(frame(x, y));
      d.B.push_back(B(x, y));
    }
  d.grid = std::move(g);
  return d;
}

std::vector<Eigen::Matrix2d> single(const Eigen::Matrix2d &S) { return {S}; }

Eigen::Vector4d qmul(const Eigen::Vector4d &a, const Eigen::Vector4d &b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

// tangent frame e1, e2 and inward normal of the unit sphere chart
Eigen::Matrix3d sphere_frame(double x, double y) {
  const double s = 1 + x * x + y * y;
  Eigen::Matrix3d P;
  P.col(0) << (1 + y * y - x * x) / s, -2 * x * y / s, 2 * x / s;
  P.col(1) << -2 * x * y / s, (1 + x * x - y * y) / s, 2 * y / s;
  P.col(2) << -2 * x / s, -2 * y / s, (1 - x * x - y * y) / s;
  return P;
}

} // namespace

Eigen::Vector3d sphere_point(double x, double y, double r) {
  const double rho = x * x + y * y;
  return r * Eigen::Vector3d(2 * x, 2 * y, rho - 1) / (1 + rho);
}

Fixture sphere_fixture(int N, double r, double codazzi_break) {
  ImmersionData d = sample(
      square_grid(N, -0.5, -0.5), 3, 1, [&](double x, double y) { return 2 * r / (1 + x * x + y * y); },
      [](double x, double y) -> Eigen::MatrixXd { return sphere_frame(x, y); },
      [&](double, double y) {
        Eigen::Matrix2d S = Eigen::Matrix2d::Identity() / r;
        S(0, 0) += codazzi_break * y;
        return single(S);
      });
  CatalogParams p;
  p.n = 3;
  return {"sphere", catalog_build(GroupTag::Rn, p), std::move(d)};
}

Fixture sphere_codim2_fixture(int N, double r) {
  auto theta = [](double x, double y) { return 0.3 * x * y; };
  ImmersionData d = sample(
      square_grid(N, -0.5, -0.5), 4, 2, [&](double x, double y) { return 2 * r / (1 + x * x + y * y); },
      [&](double x, double y) -> Eigen::MatrixXd {
        Eigen::Matrix3d P3 = sphere_frame(x, y);
        const double c = std::cos(theta(x, y)), s = std::sin(theta(x, y));
        Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
        P.block<3, 2>(0, 0) = P3.leftCols(2);
        P.block<3, 1>(0, 2) = c * P3.col(2);
        P(3, 2) = s;
        P.block<3, 1>(0, 3) = -s * P3.col(2);
        P(3, 3) = c;
        return P;
      },
      [&](double x, double y) {
        const Eigen::Matrix2d S = Eigen::Matrix2d::Identity() / r;
        return std::vector<Eigen::Matrix2d>{std::cos(theta(x, y)) * S, -std::sin(theta(x, y)) * S};
      });
  for (int j = 0; j < d.grid.ny; ++j)
    for (int i = 0; i < d.grid.nx; ++i) {
      const double x = d.grid.x(i), y = d.grid.y(j);
      std::array<Eigen::MatrixXd, 2> Nc;
      const double dth[2] = {0.3 * y, 0.3 * x};
      for (int c = 0; c < 2; ++c) {
        Nc[c] = Eigen::MatrixXd::Zero(2, 2);
        Nc[c](1, 0) = dth[c];
        Nc[c](0, 1) = -dth[c];
      }
      d.normal_connection.push_back(Nc);
    }
  CatalogParams p;
  p.n = 4;
  return {"sphere_codim2", catalog_build(GroupTag::Rn, p), std::move(d)};
}

Fixture plane_fixture(int N) {
  ImmersionData d = sample(
      square_grid(N, 0, 0), 3, 1, [](double, double) { return 1.0; },
      [](double, double) -> Eigen::MatrixXd { return Eigen::Matrix3d::Identity(); },
      [](double, double) { return single(Eigen::Matrix2d::Zero()); });
  CatalogParams p;
  p.n = 3;
  return {"plane", catalog_build(GroupTag::Rn, p), std::move(d)};
}

Fixture h2xr_slice_fixture(int N) {
  Eigen::Matrix3d P;
  P << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  ImmersionData d = sample(
      square_grid(N, 0, 1), 3, 1, [](double, double y) { return 1 / y; },
      [&](double, double) -> Eigen::MatrixXd { return P; },
      [](double, double) { return single(Eigen::Matrix2d::Zero()); });
  return {"h2xr_slice", catalog_build(GroupTag::H2xR), std::move(d)};
}

Fixture heisenberg_cylinder_fixture(int N, double tau, double rho) {
  Eigen::Matrix2d Suv;
  Suv << -1 / rho, tau, tau, 0;
  auto rot = [](double y) {
    Eigen::Matrix2d R;
    R << std::cos(y), -std::sin(y), std::sin(y), std::cos(y);
    return R;
  };
  ImmersionData d = sample(
      square_grid(N, 0, 0), 3, 1, [](double x, double) { return std::exp(x); },
      [&](double x, double y) -> Eigen::MatrixXd {
        const double s = std::exp(x) * std::cos(y) / rho;
        Eigen::Vector3d U(-std::sin(s), std::cos(s), 0), V(0, 0, 1), nu(std::cos(s), std::sin(s), 0);
        Eigen::Matrix3d P;
        P.col(0) = std::cos(y) * U + std::sin(y) * V;
        P.col(1) = -std::sin(y) * U + std::cos(y) * V;
        P.col(2) = nu;
        return P;
      },
      [&](double, double y) { return single(rot(y).transpose() * Suv * rot(y)); });
  CatalogParams p;
  p.kappa = 0;
  p.tau = tau;
  return {"heisenberg_cylinder", catalog_build(GroupTag::EKappaTau, p), std::move(d)};
}

Fixture s3_equator_fixture(int N) {
  auto frame = [](double x, double y) -> Eigen::MatrixXd {
    const double s = 1 + x * x + y * y;
    // quaternion components (w, i, j, k)
    Eigen::Vector4d p((1 - x * x - y * y) / s, 0, 2 * x / s, 2 * y / s);
    Eigen::Vector4d e1(-2 * x / s, 0, (1 + y * y - x * x) / s, -2 * x * y / s);
    Eigen::Vector4d e2(-2 * y / s, 0, -2 * x * y / s, (1 + x * x - y * y) / s);
    Eigen::Vector4d nu(0, 1, 0, 0);
    Eigen::Vector4d pc(p[0], -p[1], -p[2], -p[3]);
    Eigen::Matrix3d P;
    const Eigen::Vector4d cols[3] = {e1, e2, nu};
    for (int a = 0; a < 3; ++a) {
      Eigen::Vector4d w = qmul(pc, cols[a]);
      P.col(a) << w[2], w[3], w[1];
    }
    return P;
  };
  ImmersionData d = sample(
      square_grid(N, -0.5, -0.5), 3, 1, [](double x, double y) { return 2 / (1 + x * x + y * y); },
      frame, [](double, double) { return single(Eigen::Matrix2d::Zero()); });
  return {"s3_equator", catalog_build(GroupTag::S3), std::move(d)};
}

Fixture sol3_cylinder_fixture(int N) {
  Eigen::Matrix3d P;
  P << 1, 0, 0, 0, 0, 1, 0, -1, 0;
  ImmersionData d = sample(
      square_grid(N, 0, 1), 3, 1, [](double, double y) { return 1 / y; },
      [&](double, double) -> Eigen::MatrixXd { return P; },
      [](double, double) { return single(Eigen::Matrix2d::Zero()); });
  return {"sol3_cylinder", catalog_build(GroupTag::Sol3), std::move(d)};
}

Fixture horosphere_fixture(int N, double lambda) {
  ImmersionData d = sample(
      square_grid(N, 0, 0), 3, 1, [](double, double) { return 1.0; },
      [](double, double) -> Eigen::MatrixXd { return Eigen::Matrix3d::Identity(); },
      [&](double, double) { return single(lambda * Eigen::Matrix2d::Identity()); });
  CatalogParams p;
  p.n = 3;
  p.l = Eigen::Vector3d(0, 0, lambda);
  return {"horosphere", catalog_build(GroupTag::Hn, p), std::move(d)};
}

std::vector<std::string> fixture_names() {
  return {"sphere", "sphere_codim2", "plane", "h2xr_slice", "heisenberg_cylinder",
          "s3_equator", "sol3_cylinder", "horosphere"};
}

Fixture make_fixture(const std::string &name, int N) {
  if (name == "sphere") return sphere_fixture(N);
  if (name == "sphere_codim2") return sphere_codim2_fixture(N);
  if (name == "plane") return plane_fixture(N);
  if (name == "h2xr_slice") return h2xr_slice_fixture(N);
  if (name == "heisenberg_cylinder") return heisenberg_cylinder_fixture(N);
  if (name == "s3_equator") return s3_equator_fixture(N);
  if (name == "sol3_cylinder") return sol3_cylinder_fixture(N);
  if (name == "horosphere") return horosphere_fixture(N);
  throw InputError("unknown fixture '" + name + "'");
}

} // namespace spinorforge
