#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinorforge/errors.hpp"
#include "spinorforge/fixtures.hpp"
#include "spinorforge/spinor_killing.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>

using namespace spinorforge;

namespace {

double vmax(const std::vector<double> &v) { return summarize(v).max; }

KillingProblem problem_of(const Fixture &f) { return make_problem(f.data, f.alg); }

Eigen::Vector4d qmul(const Eigen::Vector4d &a, const Eigen::Vector4d &b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

// Curvature of the transport connection d phi/dc = b_c phi at a vertex:
// d_x b_y - d_y b_x - (b_x b_y - b_y b_x), by central differences.
Multivector curvature(const KillingProblem &p, int i, int j) {
  const ParamGrid &g = p.data.grid;
  auto b = [&](int a, int c, int d) { return transport_generator(p, a, c, d); };
  Multivector dxby = (b(i + 1, j, 1) - b(i - 1, j, 1)) * (0.5 / g.h);
  Multivector dybx = (b(i, j + 1, 0) - b(i, j - 1, 0)) * (0.5 / g.h);
  Multivector bx = b(i, j, 0), by = b(i, j, 1);
  return dxby - dybx - (bx * by - by * bx);
}

double sphere_vertex_error(const std::vector<GroupElement> &F, const ParamGrid &g) {
  const Eigen::Vector3d o = sphere_point(g.x(0), g.y(0));
  double e = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      e = std::max(e, (F[g.idx(i, j)].p - (sphere_point(g.x(i), g.y(j)) - o)).cwiseAbs().maxCoeff());
  return e;
}

std::vector<GroupElement> abelian_map(const ParamGrid &g,
                                      const std::function<Eigen::VectorXd(double, double)> &f) {
  std::vector<GroupElement> F;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) F.push_back({GroupModel::Abelian, f(g.x(i), g.y(j))});
  return F;
}

} // namespace

TEST_CASE("flat data gives the parallel spinor") {
  Fixture f = plane_fixture(8);
  KillingProblem p = problem_of(f);
  Multivector phi = sftest::random_spin(3);
  CHECK(killing_rhs(p, phi, Eigen::Vector2d(0.3, -0.7), 5).max_abs() == 0.0);
  KillingSolution s = solve_killing(p);
  for (const auto &x : s.field.phi) CHECK(distance(x, Multivector::scalar(3, 1.0)) < 1e-14);
  CHECK(s.holonomy.max == 0.0);
  CHECK(s.holonomy.integrable);
}

TEST_CASE("codimension one reduction of the second fundamental form term") {
  Fixture f = plane_fixture(2);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Matrix2d M = sftest::random_matrix(2, 2);
    const Eigen::Matrix2d S = M + M.transpose();
    f.data.B[0][0] = S;
    KillingProblem p = problem_of(f);
    Multivector phi = sftest::random_spin(3);
    Eigen::Vector2d X = sftest::random_vector(2);
    // general sum -1/2 sum_j e_j B(X, e_j) phi against -1/2 S(X) nu phi
    Multivector sum(3);
    for (int j = 0; j < 2; ++j)
      sum += Multivector::basis(3, j) * Multivector::vector(Eigen::Vector3d(0, 0, X.dot(S.col(j))));
    Eigen::Vector2d SX = S * X;
    Multivector reduced = Multivector::vector(Eigen::Vector3d(SX[0], SX[1], 0)) * Multivector::basis(3, 2);
    CHECK(distance(sum, reduced) < 1e-14);
    CHECK(distance(killing_rhs(p, phi, X, 0), -0.5 * reduced * phi) < 1e-14);
  }
}

TEST_CASE("codimension two second fundamental form term") {
  Fixture f = sphere_codim2_fixture(4);
  KillingProblem p = problem_of(f);
  for (int t = 0; t < 20; ++t) {
    const int v = t % f.data.grid.size();
    for (int r = 0; r < 2; ++r) {
      Eigen::Matrix2d S = sftest::random_matrix(2, 2);
      p.data.B[v][r] = S + S.transpose();
    }
    Multivector phi = sftest::random_spin(4);
    Eigen::Vector2d X = sftest::random_vector(2);
    Multivector sum(4);
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector4d B = Eigen::Vector4d::Zero();
      for (int r = 0; r < 2; ++r) B[2 + r] = X.dot(p.data.B[v][r].col(j));
      sum += Multivector::basis(4, j) * Multivector::vector(B);
    }
    CHECK(distance(killing_rhs(p, phi, X, v), -0.5 * sum * phi) < 1e-13);
  }
}

TEST_CASE("E(kappa, tau) right-hand side matches the psi form") {
  Fixture f = heisenberg_cylinder_fixture(8);
  KillingProblem p = problem_of(f);
  EKTData e = ekt_from_immersion(f.data, f.alg.params().kappa, f.alg.params().tau);
  for (int t = 0; t < 40; ++t) {
    const int v = (7 * t) % f.data.grid.size();
    Multivector phi = sftest::random_spin(3);
    Eigen::Vector2d X = sftest::random_vector(2);
    Eigen::Vector2d SX = f.data.S(v) * X;
    Multivector SXnu = Multivector::vector(Eigen::Vector3d(SX[0], SX[1], 0)) * Multivector::basis(3, 2);
    Multivector expected = (-0.5 * SXnu + 0.5 * ekt_gamma_bivector(e, X, v)) * phi;
    CHECK(distance(killing_rhs(p, phi, X, v), expected) < 1e-12);
  }
}

TEST_CASE("xi is a norm-preserving vector for unit spinors") {
  for (int n = 3; n <= 5; ++n)
    for (int t = 0; t < 100; ++t) {
      Multivector phi = sftest::random_spin(n);
      Eigen::VectorXd X = sftest::random_vector(n);
      Multivector full = reversal(phi) * Multivector::vector(X) * phi;
      CHECK(full.off_grade(1) <= 1e-8);
      CHECK(std::abs(xi_value(phi, X).norm() - X.norm()) <= 1e-8);
      // sign of the spinor drops out
      CHECK((xi_value(-phi, X) - xi_value(phi, X)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("xi of a non-spinor is rejected") {
  Multivector bad = Multivector::scalar(3, 1.0) + Multivector::basis(3, 0);
  CHECK_THROWS_AS(xi_value(bad, Eigen::Vector3d(1, 0, 0)), NumericalError);
}

TEST_CASE("right action equivariance") {
  for (int n = 3; n <= 5; ++n) {
    Multivector phi = sftest::random_spin(n);
    for (int t = 0; t < 100; ++t) {
      Multivector a = sftest::random_spin(n);
      Eigen::VectorXd X = sftest::random_vector(n);
      Eigen::VectorXd lhs = xi_value(phi * a, X);
      Eigen::VectorXd rhs = rotation_of_spin(reversal(a)) * xi_value(phi, X);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("complex and quaternion forms of a spinor") {
  for (int t = 0; t < 100; ++t) {
    Multivector phi = sftest::random_spin(3);
    auto [z1, z2] = z_of_spinor(phi);
    CHECK(std::norm(z1) + std::norm(z2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(distance(spinor_of_z(z1, z2), phi) < 1e-15);
    // [phi] = z1 + j z2 under e1 ~ j, e2 ~ k, e3 ~ i; quaternion products mirror Clifford products
    auto quat = [](const Multivector &m) {
      return Eigen::Vector4d(m[0], m[0b011], m[0b110], -m[0b101]);
    };
    const Eigen::Vector4d qj(0, 0, 1, 0);
    Eigen::Vector4d zq1(z1.real(), z1.imag(), 0, 0), zq2(z2.real(), z2.imag(), 0, 0);
    CHECK((quat(phi) - (zq1 + qmul(qj, zq2))).cwiseAbs().maxCoeff() < 1e-15);
    Multivector chi = sftest::random_spin(3);
    CHECK((quat(phi * chi) - qmul(quat(phi), quat(chi))).cwiseAbs().maxCoeff() < 1e-14);
    // [psi] = z1 - j i z2
    const Eigen::Vector4d qi(0, 1, 0, 0);
    Eigen::Vector4d psi = zq1 - qmul(qmul(qj, qi), zq2);
    CHECK((psi_of_z(z1, z2) - psi).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("component formula for xi agrees with the Clifford evaluator") {
  for (int t = 0; t < 200; ++t) {
    Multivector phi = sftest::random_spin(3);
    auto [z1, z2] = z_of_spinor(phi);
    Eigen::Vector3d X = sftest::random_vector(3);
    CHECK((xi_from_z(z1, z2, X) - xi_value(phi, X)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sphere holonomy converges and broken Codazzi is detected") {
  double hol[3];
  for (int r = 0; r < 3; ++r) {
    Fixture f = sphere_fixture(16 << r);
    KillingSolution s = solve_killing(problem_of(f));
    hol[r] = s.holonomy.max;
    CHECK(s.holonomy.integrable);
  }
  INFO("holonomy ", hol[0], " ", hol[1], " ", hol[2]);
  CHECK(hol[1] / hol[2] == doctest::Approx(4).epsilon(0.3));
  for (int N : {16, 32, 64}) {
    Fixture f = sphere_fixture(N, 1.0, 1e-2);
    KillingSolution s = solve_killing(problem_of(f));
    INFO("broken holonomy at N = ", N, ": ", s.holonomy.max);
    CHECK(s.holonomy.max > 1e-3);
  }
}

TEST_CASE("plaquette holonomy approximates the connection curvature") {
  for (double eps : {0.0, 0.1, 0.5}) {
    Fixture f = sphere_fixture(32, 1.0, eps);
    KillingProblem p = problem_of(f);
    KillingSolution s = solve_killing(p);
    const ParamGrid &g = f.data.grid;
    for (auto [i, j] : {std::pair{8, 8}, std::pair{16, 20}, std::pair{24, 10}}) {
      Multivector F = 0.25 * (curvature(p, i, j) + curvature(p, i + 1, j) + curvature(p, i, j + 1) +
                              curvature(p, i + 1, j + 1));
      const double expected = (F * s.field.phi[g.idx(i, j)]).max_abs();
      const double got = s.holonomy.plaquette[j * (g.nx - 1) + i];
      INFO("eps ", eps, " cell ", i, ",", j, ": ", got, " vs ", expected);
      CHECK(std::abs(got - expected) <= 0.1 * expected + 5 * g.h * g.h);
    }
  }
}

TEST_CASE("Killing and Dirac residuals converge on analytic data") {
  for (const char *name : {"sphere", "sphere_codim2", "heisenberg_cylinder", "s3_equator"}) {
    double kr[2], dr[2];
    for (int r = 0; r < 2; ++r) {
      Fixture f = make_fixture(name, 32 << r);
      KillingProblem p = problem_of(f);
      KillingSolution s = solve_killing(p);
      kr[r] = vmax(killing_residual(s.field, p));
      dr[r] = vmax(dirac_residual(s.field, p));
      CHECK(s.max_renormalization < 1e-8);
      for (const auto &phi : s.field.phi) CHECK(is_spin(phi, 1e-8));
    }
    INFO(name, " killing ", kr[0], " ", kr[1], " dirac ", dr[0], " ", dr[1]);
    CHECK(kr[0] / kr[1] > 4 * 0.7);
    CHECK(dr[0] / dr[1] > 4 * 0.7);
    CHECK(dr[1] < 1e-3);
  }
}

TEST_CASE("random spinor fields fail the Dirac equation") {
  Fixture f = sphere_fixture(16);
  KillingProblem p = problem_of(f);
  SpinorField field{f.data.grid, 3, {}};
  for (int v = 0; v < f.data.grid.size(); ++v) field.phi.push_back(sftest::random_spin(3));
  CHECK(vmax(dirac_residual(field, p)) > 0.1);
}

TEST_CASE("normalization") {
  Fixture f = sphere_fixture(16);
  KillingProblem p = problem_of(f);
  SpinorField phi = normalize_spinor(solve_killing(p).field, p);
  Multivector a = normalizing_factor(phi, p);
  CHECK(distance(a, Multivector::scalar(3, 1.0)) < 1e-10);
  // xi at the base vertex sends the frame sections to the algebra basis
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd x = xi_value(phi.phi[0], f.data.frame[0].row(i).transpose());
    CHECK((x - Eigen::Vector3d::Unit(i)).cwiseAbs().maxCoeff() < 1e-10);
  }
  LieValuedOneForm xi = xi_from_spinor(phi, p);
  for (int t = 0; t < 10; ++t) {
    SpinorField moved = phi;
    Multivector b = sftest::random_spin(3);
    for (auto &x : moved.phi) x = x * b;
    LieValuedOneForm back = xi_from_spinor(normalize_spinor(moved, p), p);
    double e = 0;
    for (int v = 0; v < f.data.grid.size(); ++v)
      e = std::max({e, (back.dx[v] - xi.dx[v]).cwiseAbs().maxCoeff(), (back.dy[v] - xi.dy[v]).cwiseAbs().maxCoeff()});
    CHECK(e < 1e-10);
  }
}

TEST_CASE("sphere reconstruction") {
  double verr[2], sr[2];
  for (int r = 0; r < 2; ++r) {
    const int N = 32 << r;
    Fixture f = sphere_fixture(N);
    const auto t0 = std::chrono::steady_clock::now();
    ReconstructReport rep = reconstruct_immersion(problem_of(f));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double h2 = 1.0 / (N * N);
    verr[r] = sphere_vertex_error(rep.F, f.data.grid);
    sr[r] = rep.structure_residual;
    INFO("N = ", N, " vertex ", verr[r], " isometry ", rep.isometry_error, " sff ", rep.sff_error);
    CHECK(rep.integrable);
    CHECK(rep.structure_ok);
    CHECK(verr[r] <= 5 * h2);
    CHECK(rep.isometry_error <= 5 * h2);
    CHECK(rep.sff_error <= 5 * h2);
    CHECK(secs < 10);
  }
  CHECK(sr[0] / sr[1] == doctest::Approx(4).epsilon(0.3));
}

TEST_CASE("codimension two reconstruction recovers the normal connection") {
  Fixture f = sphere_codim2_fixture(32);
  ReconstructReport rep = reconstruct_immersion(problem_of(f));
  const double h2 = 1.0 / (32 * 32);
  CHECK(rep.isometry_error <= 5 * h2);
  CHECK(rep.sff_error <= 5 * h2);
  CHECK(rep.normal_connection_error <= 5 * h2);
  // the surface stays in the hyperplane x4 = 0
  for (const auto &g : rep.F) CHECK(std::abs(g.p[3]) <= 5 * h2);
}

TEST_CASE("plane reconstruction is flat") {
  Fixture f = plane_fixture(8);
  ReconstructReport rep = reconstruct_immersion(problem_of(f));
  const ParamGrid &g = f.data.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      CHECK((rep.F[g.idx(i, j)].p - Eigen::Vector3d(g.x(i), g.y(j), 0)).norm() < 1e-12);
}

TEST_CASE("great sphere of S3 and the Morel equation") {
  double mr[3];
  for (int r = 0; r < 3; ++r) {
    const int N = 16 << r;
    Fixture f = s3_equator_fixture(N);
    KillingProblem p = problem_of(f);
    ReconstructReport rep = reconstruct_immersion(p);
    // the great sphere {w + y j + z k}, left-translated so the base vertex sits at 1
    const ParamGrid &g = f.data.grid;
    auto sphere = [](double x, double y) {
      const double s = 1 + x * x + y * y;
      return Eigen::Vector4d((1 - x * x - y * y) / s, 0, 2 * x / s, 2 * y / s);
    };
    Eigen::Vector4d p0 = sphere(g.x(0), g.y(0));
    p0.tail<3>() *= -1;
    double e = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Eigen::VectorXd &q = rep.F[g.idx(i, j)].p;
        CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-10));
        e = std::max(e, (q - qmul(p0, sphere(g.x(i), g.y(j)))).cwiseAbs().maxCoeff());
      }
    CHECK(e <= 5.0 / (N * N));
    mr[r] = vmax(morel_residual(rep.solution.field, p, 0.0));
  }
  INFO("Morel residuals ", mr[0], " ", mr[1], " ", mr[2]);
  CHECK(mr[1] / mr[2] == doctest::Approx(4).epsilon(0.3));
}

TEST_CASE("spinor of an explicit sphere") {
  double serr[2];
  for (int r = 0; r < 2; ++r) {
    const int N = 16 << r;
    ParamGrid g(N + 1, N + 1, 1.0 / N, -0.5, -0.5);
    auto F = abelian_map(g, [](double x, double y) -> Eigen::VectorXd { return sphere_point(x, y); });
    MetricLieAlgebra alg = sphere_fixture(2).alg;
    SpinorOfImmersion out = spinor_of_immersion(F, g, alg);
    serr[r] = 0;
    for (int v = 0; v < g.size(); ++v)
      serr[r] = std::max(serr[r], (out.data.S(v) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    KillingProblem p = make_problem(out.data, alg);
    CHECK(vmax(killing_residual(out.field, p)) < 20.0 / (N * N));
    // back to the map, up to the base point
    ReconstructReport rep = reconstruct_immersion(p);
    double e = 0;
    for (int v = 0; v < g.size(); ++v) e = std::max(e, (rep.F[v].p - (F[v].p - F[0].p)).cwiseAbs().maxCoeff());
    CHECK(e <= 5.0 / (N * N));
  }
  INFO("shape operator errors ", serr[0], " ", serr[1]);
  CHECK(serr[1] < 5.0 / (32 * 32));
  CHECK(serr[0] / serr[1] > 4 * 0.7);
}

TEST_CASE("spinor of the identity chart of a plane") {
  ParamGrid g(5, 5, 0.25);
  auto F = abelian_map(g, [](double x, double y) -> Eigen::VectorXd { return Eigen::Vector3d(x, y, 0); });
  SpinorOfImmersion out = spinor_of_immersion(F, g, plane_fixture(2).alg);
  for (const auto &phi : out.field.phi) CHECK(distance(phi, Multivector::scalar(3, 1.0)) < 1e-12);
  for (int v = 0; v < g.size(); ++v) CHECK(out.data.S(v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spinor of a vertical plane in Sol3") {
  double res[2];
  for (int r = 0; r < 2; ++r) {
    const int N = 16 << r;
    Fixture f = sol3_cylinder_fixture(N);
    std::vector<GroupElement> F;
    const ParamGrid &g = f.data.grid;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        F.push_back({GroupModel::SemiDirect, Eigen::Vector3d(g.x(i), 0, -std::log(g.y(j)))});
    SpinorOfImmersion out = spinor_of_immersion(F, g, f.alg);
    for (int v = 0; v < g.size(); ++v) {
      CHECK((out.data.frame[v] - f.data.frame[v]).cwiseAbs().maxCoeff() < 1e-6);
      CHECK(std::abs(out.data.grid.mu[v] - f.data.grid.mu[v]) < 1e-4);
    }
    auto c = frame_compat_residuals(out.data, f.alg);
    res[r] = std::max(vmax(c.tangent), vmax(c.function));
  }
  INFO("compat residuals ", res[0], " ", res[1]);
  CHECK(res[1] < 1e-3);
  CHECK(res[0] / res[1] > 4 * 0.7);
}

TEST_CASE("degenerate and non-conformal maps are rejected") {
  ParamGrid g(4, 4, 0.25);
  MetricLieAlgebra alg = plane_fixture(2).alg;
  auto flat = abelian_map(g, [](double, double) -> Eigen::VectorXd { return Eigen::Vector3d::Zero(); });
  CHECK_THROWS_AS(spinor_of_immersion(flat, g, alg), InputError);
  auto stretched = abelian_map(g, [](double x, double y) -> Eigen::VectorXd { return Eigen::Vector3d(2 * x, y, 0); });
  CHECK_THROWS_AS(spinor_of_immersion(stretched, g, alg), InputError);
}

TEST_CASE("mismatched problems are rejected") {
  Fixture f = sphere_fixture(4);
  KillingProblem p = make_problem(f.data, sphere_codim2_fixture(4).alg);
  CHECK_THROWS_AS(solve_killing(p), InputError);
  KillingProblem q = problem_of(f);
  q.base_spinor = Multivector::scalar(3, 2.0);
  CHECK_THROWS_AS(solve_killing(q), InputError);
}
