#include "spinorforge/clifford.hpp"
#include "spinorforge/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace spinorforge {

namespace {

constexpr std::uint32_t kBlades = 1u << kMaxCliffordDim;

int sign_by_counting(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  for (int k = 0; k < kMaxCliffordDim; ++k)
    if (b >> k & 1u) swaps += std::popcount(a >> (k + 1));
  swaps += std::popcount(a & b); // e_i e_i = -1
  return swaps % 2 ? -1 : 1;
}

struct SignTable {
  std::vector<signed char> s;
  SignTable() : s(kBlades * kBlades) {
    for (std::uint32_t a = 0; a < kBlades; ++a)
      for (std::uint32_t b = 0; b < kBlades; ++b)
        s[a * kBlades + b] = static_cast<signed char>(sign_by_counting(a, b));
  }
};

const SignTable &signs() {
  static const SignTable t;
  return t;
}

void check_dim(int n) {
  if (n < 1 || n > kMaxCliffordDim)
    throw InputError("clifford dimension must be in [1, 8], got " + std::to_string(n));
}

void same_dim(const Multivector &a, const Multivector &b) {
  if (a.dim() != b.dim())
    throw InputError("multivector dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
}

} // namespace

int blade_sign(std::uint32_t a, std::uint32_t b) { return signs().s[a * kBlades + b]; }
int grade_of(std::uint32_t mask) { return std::popcount(mask); }

Multivector::Multivector(int dim) : dim_(dim) {
  check_dim(dim);
  c_.assign(std::size_t{1} << dim, 0.0);
}

Multivector Multivector::scalar(int dim, double s) {
  Multivector m(dim);
  m.c_[0] = s;
  return m;
}

Multivector Multivector::basis(int dim, int i) {
  if (i < 0 || i >= dim) throw InputError("basis index out of range");
  return blade(dim, 1u << i);
}

Multivector Multivector::blade(int dim, std::uint32_t mask, double c) {
  Multivector m(dim);
  if (mask >= m.size()) throw InputError("blade mask out of range");
  m.c_[mask] = c;
  return m;
}

Multivector Multivector::vector(const Eigen::VectorXd &v) {
  Multivector m(static_cast<int>(v.size()));
  for (int i = 0; i < v.size(); ++i) m.c_[1u << i] = v[i];
  return m;
}

Multivector Multivector::grade(int r) const {
  Multivector m(dim_);
  for (std::uint32_t k = 0; k < c_.size(); ++k)
    if (grade_of(k) == r) m.c_[k] = c_[k];
  return m;
}

Multivector Multivector::even_part() const {
  Multivector m(dim_);
  for (std::uint32_t k = 0; k < c_.size(); ++k)
    if (grade_of(k) % 2 == 0) m.c_[k] = c_[k];
  return m;
}

Eigen::VectorXd Multivector::vector_part() const {
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = c_[1u << i];
  return v;
}

double Multivector::off_grade(int r) const {
  double m = 0;
  for (std::uint32_t k = 0; k < c_.size(); ++k)
    if (grade_of(k) != r) m = std::max(m, std::abs(c_[k]));
  return m;
}

double Multivector::max_abs() const {
  double m = 0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

Multivector &Multivector::operator+=(const Multivector &o) {
  same_dim(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Multivector &Multivector::operator-=(const Multivector &o) {
  same_dim(*this, o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Multivector &Multivector::operator*=(double s) {
  for (double &x : c_) x *= s;
  return *this;
}

Multivector operator+(Multivector a, const Multivector &b) { return a += b; }
Multivector operator-(Multivector a, const Multivector &b) { return a -= b; }
Multivector operator-(Multivector a) { return a *= -1.0; }
Multivector operator*(Multivector a, double s) { return a *= s; }
Multivector operator*(double s, Multivector a) { return a *= s; }
Multivector operator*(const Multivector &a, const Multivector &b) { return geometric_product(a, b); }

Multivector geometric_product(const Multivector &a, const Multivector &b) {
  same_dim(a, b);
  const auto &tab = signs().s;
  Multivector r(a.dim());
  const std::uint32_t m = static_cast<std::uint32_t>(a.size());
  for (std::uint32_t i = 0; i < m; ++i) {
    double ai = a[i];
    if (ai == 0.0) continue;
    const signed char *row = &tab[i * kBlades];
    for (std::uint32_t j = 0; j < m; ++j) {
      double bj = b[j];
      if (bj == 0.0) continue;
      r[i ^ j] += row[j] * ai * bj;
    }
  }
  return r;
}

Multivector reversal(const Multivector &a) {
  Multivector r = a;
  for (std::uint32_t k = 0; k < a.size(); ++k) {
    int g = grade_of(k);
    if ((g * (g - 1) / 2) % 2) r[k] = -r[k];
  }
  return r;
}

Multivector spin_bracket(const Multivector &phi, const Multivector &psi) {
  same_dim(phi, psi);
  return reversal(psi) * phi;
}

Multivector commutator(const Multivector &a, const Multivector &b) {
  return 0.5 * (a * b - b * a);
}

double distance(const Multivector &a, const Multivector &b) { return (a - b).max_abs(); }

Multivector bivector_of_skew(const Eigen::MatrixXd &u) {
  if (u.rows() != u.cols()) throw InputError("skew operator must be square");
  const int n = static_cast<int>(u.rows());
  check_dim(n);
  if ((u + u.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw InputError("operator is not antisymmetric");
  Multivector b(n);
  // 1/2 sum_j e_j u(e_j) = sum_{j<k} u(k,j) e_j e_k
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) b[(1u << j) | (1u << k)] = u(k, j);
  return b;
}

Multivector bivector_of_offdiag(const Eigen::MatrixXd &u) {
  const int q = static_cast<int>(u.rows()), p = static_cast<int>(u.cols());
  if (p < 1 || q < 1) throw InputError("off-diagonal operator needs p, q >= 1");
  check_dim(p + q);
  Multivector b(p + q);
  for (int j = 0; j < p; ++j)
    for (int r = 0; r < q; ++r) b[(1u << j) | (1u << (p + r))] = u(r, j);
  return b;
}

Eigen::MatrixXd skew_of_bivector(const Multivector &b) {
  const int n = b.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      m(k, j) = b[(1u << j) | (1u << k)];
      m(j, k) = -m(k, j);
    }
  return m;
}

bool is_spin(const Multivector &g, double tol) {
  if ((g - g.even_part()).max_abs() > tol) return false;
  Multivector u = reversal(g) * g;
  u[0] -= 1.0;
  return u.max_abs() <= tol;
}

Multivector adjoint_action(const Multivector &a, const Multivector &x) {
  if (!is_spin(a, 1e-8)) throw InputError("adjoint action needs a unit spin element");
  return a * x * reversal(a);
}

Eigen::VectorXd adjoint_action(const Multivector &a, const Eigen::VectorXd &x) {
  return adjoint_action(a, Multivector::vector(x)).vector_part();
}

Eigen::MatrixXd rotation_of_spin(const Multivector &a) {
  const int n = a.dim();
  Eigen::MatrixXd T(n, n);
  Multivector ra = reversal(a);
  for (int j = 0; j < n; ++j) T.col(j) = (a * Multivector::basis(n, j) * ra).vector_part();
  return T;
}

Multivector canonical_sign(Multivector a) {
  constexpr double tie = 1e-12;
  double s = a.scalar_part();
  bool flip = s < -tie;
  if (std::abs(s) <= tie) {
    for (std::uint32_t k = 1; k < a.size(); ++k)
      if (grade_of(k) == 2 && std::abs(a[k]) > tie) {
        flip = a[k] < 0;
        break;
      }
  }
  if (flip) a *= -1.0;
  return a;
}

Multivector spin_lift(const Eigen::MatrixXd &T) {
  if (T.rows() != T.cols()) throw InputError("spin_lift needs a square matrix");
  const int n = static_cast<int>(T.rows());
  check_dim(n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  if ((T.transpose() * T - I).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("spin_lift: matrix is not orthogonal");
  if (T.determinant() < 0) throw InputError("spin_lift: determinant is negative");

  Eigen::MatrixXd M = T;
  Multivector a = Multivector::scalar(n, 1.0);
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = n - 1; i > j; --i) {
      double th = std::atan2(M(i, j), M(j, j));
      if (th == 0.0) continue;
      double c = std::cos(th), s = std::sin(th);
      Eigen::RowVectorXd rj = M.row(j), ri = M.row(i);
      M.row(j) = c * rj + s * ri;
      M.row(i) = -s * rj + c * ri;
      // T = G_1^T G_2^T ..., each G^T a rotation by th in the (j, i) plane
      Multivector f = Multivector::scalar(n, std::cos(th / 2));
      f[(1u << j) | (1u << i)] = std::sin(th / 2);
      a = a * f;
    }
  }
  renormalize_spin(a);
  return canonical_sign(a);
}

double renormalize_spin(Multivector &g) {
  g = g.even_part();
  Multivector eps = reversal(g) * g;
  eps[0] -= 1.0;
  g = g * (Multivector::scalar(g.dim(), 1.0) - 0.5 * eps);
  return 0.5 * eps.max_abs();
}

} // namespace spinorforge
