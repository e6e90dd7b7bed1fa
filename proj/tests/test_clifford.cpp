#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinorforge/clifford.hpp"
#include "spinorforge/errors.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace spinorforge;
using sftest::random_multivector;
using sftest::random_spin;

namespace {

// Product of two blades by sorting the concatenated generator list.
std::pair<int, std::uint32_t> blade_product_by_sorting(std::uint32_t a, std::uint32_t b) {
  std::vector<int> g;
  for (int k = 0; k < 8; ++k)
    if (a >> k & 1u) g.push_back(k);
  for (int k = 0; k < 8; ++k)
    if (b >> k & 1u) g.push_back(k);
  int sign = 1;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j + 1 < g.size() - i; ++j)
      if (g[j] > g[j + 1]) {
        std::swap(g[j], g[j + 1]);
        sign = -sign;
      }
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < g.size();) {
    if (i + 1 < g.size() && g[i] == g[i + 1]) {
      sign = -sign;
      i += 2;
    } else {
      mask |= 1u << g[i];
      ++i;
    }
  }
  return {sign, mask};
}

Multivector oracle_product(const Multivector &a, const Multivector &b) {
  Multivector r(a.dim());
  for (std::uint32_t i = 0; i < a.size(); ++i)
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      auto [s, m] = blade_product_by_sorting(i, j);
      r[m] += s * a[i] * b[j];
    }
  return r;
}

Multivector oracle_reversal(const Multivector &a) {
  // reverse each blade's generator list and sort it back
  Multivector r(a.dim());
  for (std::uint32_t k = 0; k < a.size(); ++k) {
    int swaps = 0, g = std::popcount(k);
    for (int i = 0; i < g; ++i) swaps += i;
    r[k] = (swaps % 2 ? -1 : 1) * a[k];
  }
  return r;
}

Multivector e(int n, std::initializer_list<int> idx) {
  Multivector r = Multivector::scalar(n, 1.0);
  for (int i : idx) r = r * Multivector::basis(n, i - 1);
  return r;
}

} // namespace

TEST_CASE("sign table agrees with generator sorting for every blade pair") {
  for (std::uint32_t a = 0; a < 256; ++a)
    for (std::uint32_t b = 0; b < 256; ++b) {
      auto [s, m] = blade_product_by_sorting(a, b);
      REQUIRE(blade_sign(a, b) == s);
      REQUIRE((a ^ b) == m);
    }
}

TEST_CASE("generators square to -1 and anticommute") {
  for (int n = 1; n <= 8; ++n)
    for (int i = 0; i < n; ++i) {
      CHECK((Multivector::basis(n, i) * Multivector::basis(n, i)).scalar_part() == -1.0);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        Multivector s = Multivector::basis(n, i) * Multivector::basis(n, j) +
                        Multivector::basis(n, j) * Multivector::basis(n, i);
        CHECK(s.max_abs() == 0.0);
      }
    }
}

TEST_CASE("vector anticommutator is -2 <X,Y>") {
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 6;
    Eigen::VectorXd x = sftest::random_vector(n), y = sftest::random_vector(n);
    Multivector X = Multivector::vector(x), Y = Multivector::vector(y);
    Multivector s = X * Y + Y * X;
    CHECK(s.off_grade(0) < 1e-14);
    CHECK(s.scalar_part() == doctest::Approx(-2 * x.dot(y)).epsilon(1e-13));
  }
}

TEST_CASE("frozen products") {
  const int n = 3;
  Multivector v = e(n, {1}) + 2.0 * e(n, {2});
  Multivector p = v * e(n, {1, 2});
  CHECK(distance(p, 2.0 * e(n, {1}) - e(n, {2})) < 1e-15);
  // e1 e2 e3 squares to +1 in Cl_3 with negative-definite generators
  Multivector vol = e(n, {1, 2, 3});
  CHECK(distance(vol * vol, Multivector::scalar(n, 1.0)) < 1e-15);
  CHECK(e(n, {3, 1})[0b101] == -1.0);
}

TEST_CASE("geometric product matches the sorting oracle, is associative and unital") {
  for (int t = 0; t < 500; ++t) {
    int n = 1 + t % 6;
    Multivector a = random_multivector(n), b = random_multivector(n), c = random_multivector(n);
    REQUIRE(distance(a * b, oracle_product(a, b)) < 1e-12);
    CHECK(distance((a * b) * c, a * (b * c)) < 1e-10);
    CHECK(distance(Multivector::scalar(n, 1.0) * a, a) == 0.0);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(Multivector(3) * Multivector(4), InputError);
  CHECK_THROWS_AS(Multivector(9), InputError);
}

TEST_CASE("reversal") {
  CHECK(reversal(Multivector::scalar(3, 1.0)).scalar_part() == 1.0);
  CHECK(distance(reversal(e(3, {1, 2})), -e(3, {1, 2})) == 0.0);
  for (int t = 0; t < 500; ++t) {
    int n = 1 + t % 6;
    Multivector a = random_multivector(n), b = random_multivector(n);
    CHECK(distance(reversal(a), oracle_reversal(a)) == 0.0);
    CHECK(distance(reversal(reversal(a)), a) == 0.0);
    CHECK(distance(reversal(a * b), reversal(b) * reversal(a)) < 1e-12);
  }
}

TEST_CASE("spin bracket properties") {
  CHECK(distance(spin_bracket(Multivector::scalar(3, 1), Multivector::scalar(3, 1)),
                 Multivector::scalar(3, 1)) == 0.0);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 5;
    Multivector phi = random_multivector(n), psi = random_multivector(n), g = random_spin(n);
    Multivector X = Multivector::vector(sftest::random_vector(n));
    CHECK(distance(spin_bracket(g * phi, g * psi), spin_bracket(phi, psi)) < 1e-10);
    CHECK(distance(spin_bracket(phi, psi), reversal(spin_bracket(psi, phi))) < 1e-12);
    CHECK(distance(spin_bracket(X * phi, psi), spin_bracket(phi, X * psi)) < 1e-12);
    CHECK(distance(spin_bracket(g, g), Multivector::scalar(n, 1.0)) < 1e-12);
  }
}

TEST_CASE("spin elements are closed under products") {
  for (int t = 0; t < 100; ++t) {
    int n = 2 + t % 6;
    CHECK(is_spin(random_spin(n) * random_spin(n)));
  }
  CHECK_FALSE(is_spin(Multivector::basis(3, 0)));
  CHECK_FALSE(is_spin(2.0 * Multivector::scalar(3, 1)));
}

TEST_CASE("bivector of a skew operator") {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(3, 3);
  u(1, 0) = 1;
  u(0, 1) = -1;
  CHECK(distance(bivector_of_skew(u), e(3, {1, 2})) == 0.0);
  CHECK(bivector_of_skew(Eigen::MatrixXd::Zero(4, 4)).max_abs() == 0.0);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(bivector_of_skew(bad), InputError);

  for (int t = 0; t < 500; ++t) {
    int n = 3 + t % 3;
    Eigen::MatrixXd m = sftest::random_skew(n);
    Multivector b = bivector_of_skew(m);
    // literal definition 1/2 sum_j e_j u(e_j)
    Multivector lit(n);
    for (int j = 0; j < n; ++j)
      lit += 0.5 * (Multivector::basis(n, j) * Multivector::vector(m.col(j)));
    CHECK(distance(b, lit) < 1e-14);
    Eigen::VectorXd x = sftest::random_vector(n);
    Multivector cx = commutator(b, Multivector::vector(x));
    CHECK(cx.off_grade(1) < 1e-14);
    CHECK((cx.vector_part() - m * x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((skew_of_bivector(b) - m).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("commutator of bivectors represents the operator commutator") {
  for (int t = 0; t < 500; ++t) {
    int n = 3 + t % 3;
    Eigen::MatrixXd u = sftest::random_skew(n), v = sftest::random_skew(n);
    Eigen::MatrixXd w = u * v - v * u;
    w = 0.5 * (w - w.transpose());
    CHECK(distance(commutator(bivector_of_skew(u), bivector_of_skew(v)), bivector_of_skew(w)) < 1e-12);
  }
  for (int t = 0; t < 100; ++t) {
    Multivector a = bivector_of_skew(sftest::random_skew(4)), b = bivector_of_skew(sftest::random_skew(4)),
                c = bivector_of_skew(sftest::random_skew(4));
    CHECK(commutator(a, a).max_abs() == 0.0);
    Multivector j = commutator(commutator(a, b), c) + commutator(commutator(b, c), a) +
                    commutator(commutator(c, a), b);
    CHECK(j.max_abs() < 1e-12);
  }
}

TEST_CASE("bivector of an off-diagonal operator") {
  Eigen::MatrixXd one(1, 1);
  one << 1;
  Multivector b = bivector_of_offdiag(one);
  CHECK(distance(b, e(2, {1, 2})) == 0.0);
  CHECK(distance(commutator(b, e(2, {1})), e(2, {2})) < 1e-15);
  CHECK(distance(commutator(b, e(2, {2})), -e(2, {1})) < 1e-15);
  CHECK(bivector_of_offdiag(Eigen::MatrixXd::Zero(2, 3)).max_abs() == 0.0);

  for (int t = 0; t < 500; ++t) {
    int n = 3 + t % 3, p = 1 + t % (n - 1), q = n - p;
    Eigen::MatrixXd u = sftest::random_matrix(q, p), v = sftest::random_skew(n);
    // operator U(x) = u(x_p) - u*(x_q) on R^n
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n, n);
    U.bottomLeftCorner(q, p) = u;
    U.topRightCorner(p, q) = -u.transpose();
    Multivector ub = bivector_of_offdiag(u);
    Eigen::VectorXd x = sftest::random_vector(n);
    CHECK((commutator(ub, Multivector::vector(x)).vector_part() - U * x).cwiseAbs().maxCoeff() < 1e-12);
    // mixed commutator with a skew operand
    Eigen::VectorXd lhs = commutator(commutator(ub, bivector_of_skew(v)), Multivector::vector(x)).vector_part();
    Eigen::VectorXd vx = v * x, uxp = u * x.head(p), usxq = u.transpose() * x.tail(q);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs.head(p) -= u.transpose() * vx.tail(q);
    rhs += v * (Eigen::VectorXd(n) << usxq, Eigen::VectorXd::Zero(q)).finished();
    rhs.tail(q) += u * vx.head(p);
    rhs -= v * (Eigen::VectorXd(n) << Eigen::VectorXd::Zero(p), uxp).finished();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("adjoint action") {
  const double th = 0.7;
  Multivector a = Multivector::scalar(3, std::cos(th / 2)) + std::sin(th / 2) * e(3, {1, 2});
  Eigen::VectorXd r = adjoint_action(a, Eigen::VectorXd(Eigen::Vector3d(1, 0, 0)));
  CHECK(r[0] == doctest::Approx(std::cos(th)));
  CHECK(r[1] == doctest::Approx(std::sin(th)));
  CHECK(std::abs(r[2]) < 1e-15);
  Eigen::VectorXd x = sftest::random_vector(4);
  CHECK((adjoint_action(Multivector::scalar(4, 1.0), x) - x).norm() == 0.0);
  for (int t = 0; t < 500; ++t) {
    int n = 2 + t % 6;
    Multivector g = random_spin(n);
    Eigen::VectorXd v = sftest::random_vector(n);
    Multivector y = adjoint_action(g, Multivector::vector(v));
    CHECK(y.off_grade(1) < 1e-12);
    CHECK(y.vector_part().norm() == doctest::Approx(v.norm()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(adjoint_action(2.0 * Multivector::scalar(3, 1), Multivector::basis(3, 0)), InputError);
}

TEST_CASE("spin lift") {
  Multivector one = spin_lift(Eigen::MatrixXd::Identity(3, 3));
  CHECK(distance(one, Multivector::scalar(3, 1.0)) < 1e-15);

  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(3, 3);
  R(0, 0) = 0, R(1, 0) = 1, R(0, 1) = -1, R(1, 1) = 0;
  Multivector a = spin_lift(R);
  const double c = std::cos(std::numbers::pi / 4);
  Multivector want = Multivector::scalar(3, c) + c * e(3, {1, 2});
  CHECK(std::min(distance(a, want), distance(a, -want)) < 1e-14);
  CHECK((rotation_of_spin(a) - R).cwiseAbs().maxCoeff() < 1e-14);

  // rotations by pi leave a zero scalar part
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(4, 4);
  P(0, 0) = P(1, 1) = -1;
  Multivector b = spin_lift(P);
  CHECK((rotation_of_spin(b) - P).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(b.scalar_part()) < 1e-14);
  CHECK(b[0b11] > 0);

  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 7;
    Eigen::MatrixXd T = sftest::random_rotation(n);
    Multivector g = spin_lift(T);
    CHECK(is_spin(g));
    CHECK(g.scalar_part() >= 0);
    CHECK((rotation_of_spin(g) - T).cwiseAbs().maxCoeff() < 1e-8);
  }
  Eigen::MatrixXd refl = Eigen::MatrixXd::Identity(3, 3);
  refl(2, 2) = -1;
  CHECK_THROWS_AS(spin_lift(refl), InputError);
  CHECK_THROWS_AS(spin_lift(2.0 * Eigen::MatrixXd::Identity(3, 3)), InputError);
}

TEST_CASE("renormalization pulls a perturbed spin element back") {
  Multivector g = random_spin(4);
  g[0] += 1e-6;
  renormalize_spin(g);
  CHECK(is_spin(g, 1e-11));
}
