#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spinorforge {

inline constexpr int kMaxCliffordDim = 8;

// Element of the real Clifford algebra Cl_n with e_i e_i = -1.
// Coefficients are indexed by blade bitmask: bit k set <=> e_{k+1} present,
// factors written in increasing index order.
class Multivector {
public:
  Multivector() = default;
  explicit Multivector(int dim);

  static Multivector scalar(int dim, double s);
  static Multivector basis(int dim, int i); // e_{i+1}, zero-based
  static Multivector blade(int dim, std::uint32_t mask, double c = 1.0);
  static Multivector vector(const Eigen::VectorXd &v);

  int dim() const { return dim_; }
  std::size_t size() const { return c_.size(); }
  double operator[](std::uint32_t mask) const { return c_[mask]; }
  double &operator[](std::uint32_t mask) { return c_[mask]; }
  const std::vector<double> &coeffs() const { return c_; }

  double scalar_part() const { return c_[0]; }
  Multivector grade(int r) const;
  Multivector even_part() const;
  Eigen::VectorXd vector_part() const;
  // largest |coefficient| outside grade r
  double off_grade(int r) const;
  double max_abs() const;

  Multivector &operator+=(const Multivector &o);
  Multivector &operator-=(const Multivector &o);
  Multivector &operator*=(double s);

private:
  int dim_ = 0;
  std::vector<double> c_;
};

Multivector operator+(Multivector a, const Multivector &b);
Multivector operator-(Multivector a, const Multivector &b);
Multivector operator-(Multivector a);
Multivector operator*(Multivector a, double s);
Multivector operator*(double s, Multivector a);
Multivector operator*(const Multivector &a, const Multivector &b);

// sign of e_A e_B = sign * e_{A xor B}
int blade_sign(std::uint32_t a, std::uint32_t b);
int grade_of(std::uint32_t mask);

Multivector geometric_product(const Multivector &a, const Multivector &b);
Multivector reversal(const Multivector &a);
// <<phi, psi>> = tau(psi) phi
Multivector spin_bracket(const Multivector &phi, const Multivector &psi);
Multivector commutator(const Multivector &a, const Multivector &b);
double distance(const Multivector &a, const Multivector &b);

// 1/2 sum_j e_j u(e_j) for antisymmetric u
Multivector bivector_of_skew(const Eigen::MatrixXd &u);
// u : R^p -> R^q given as a q x p matrix, ambient R^{p+q}
Multivector bivector_of_offdiag(const Eigen::MatrixXd &u);
// skew operator x -> [b, x] on vectors, for a bivector b
Eigen::MatrixXd skew_of_bivector(const Multivector &b);

bool is_spin(const Multivector &g, double tol = 1e-10);
Multivector adjoint_action(const Multivector &a, const Multivector &x);
Eigen::VectorXd adjoint_action(const Multivector &a, const Eigen::VectorXd &x);
Eigen::MatrixXd rotation_of_spin(const Multivector &a);
// Givens factorization of T in SO(n), lifted factor by factor
Multivector spin_lift(const Eigen::MatrixXd &T);
// fix the global sign: scalar part >= 0, ties by first nonzero bivector coefficient
Multivector canonical_sign(Multivector a);
// one Newton step toward tau(g) g = 1; returns the size of the correction
double renormalize_spin(Multivector &g);

} // namespace spinorforge
