#pragma once
#include "spinorforge/clifford.hpp"

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

namespace spinorforge {

enum class GroupTag { Rn, Hn, S3, EKappaTau, SemiDirect, Sol3, H2xR, Unimodular };

std::string tag_name(GroupTag t);
GroupTag parse_tag(const std::string &s);

struct CatalogParams {
  int n = 3;                  // Rn, Hn
  Eigen::VectorXd l;          // Hn linear form; empty means e_n^*
  double kappa = 0, tau = 1;  // EKappaTau
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero(); // SemiDirect [[a,b],[c,d]]
  Eigen::Vector3d mu = Eigen::Vector3d::Zero(); // Unimodular

  double sigma() const { return kappa / (2 * tau); }
};

// Metric Lie algebra in an orthonormal basis: [e_i, e_j] = sum_k c(i,j,k) e_k,
// Gamma(e_i) e_j = sum_k gamma(i,j,k) e_k.
class MetricLieAlgebra {
public:
  MetricLieAlgebra(int n, std::vector<double> c, GroupTag tag, CatalogParams params);

  int dim() const { return n_; }
  GroupTag tag() const { return tag_; }
  const CatalogParams &params() const { return params_; }
  double c(int i, int j, int k) const { return c_[(i * n_ + j) * n_ + k]; }
  double gamma(int i, int j, int k) const { return g_[(i * n_ + j) * n_ + k]; }
  const std::vector<double> &structure_constants() const { return c_; }
  const std::vector<double> &connection() const { return g_; }

  Eigen::VectorXd bracket(const Eigen::VectorXd &X, const Eigen::VectorXd &Y) const;
  // matrix of Y -> Gamma(X) Y
  Eigen::MatrixXd gamma_op(const Eigen::VectorXd &X) const;
  // matrix of Y -> [X, Y]
  Eigen::MatrixXd ad(const Eigen::VectorXd &X) const;
  double jacobi_residual() const;

private:
  int n_;
  std::vector<double> c_, g_;
  GroupTag tag_;
  CatalogParams params_;
};

// Gamma_ij^k = 1/2 (c_ij^k + c_ki^j - c_jk^i)
std::vector<double> koszul_connection(int n, const std::vector<double> &c);
Eigen::VectorXd torsion_residual(const MetricLieAlgebra &alg, const Eigen::VectorXd &X,
                                 const Eigen::VectorXd &Y);
// R(X,Y) = [Gamma(X), Gamma(Y)] - Gamma([X,Y])
Eigen::MatrixXd curvature(const MetricLieAlgebra &alg, const Eigen::VectorXd &X,
                          const Eigen::VectorXd &Y);
double sectional_curvature(const MetricLieAlgebra &alg, const Eigen::VectorXd &X,
                           const Eigen::VectorXd &Y);
MetricLieAlgebra catalog_build(GroupTag tag, const CatalogParams &p = {});
Multivector gamma_as_bivector(const MetricLieAlgebra &alg, const Eigen::VectorXd &X);

nlohmann::json to_json(const MetricLieAlgebra &alg);
MetricLieAlgebra algebra_from_json(const nlohmann::json &j);
CatalogParams params_from_json(GroupTag tag, const nlohmann::json &j);
nlohmann::json params_to_json(GroupTag tag, const CatalogParams &p);

} // namespace spinorforge
