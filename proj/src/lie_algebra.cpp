#include "spinorforge/lie_algebra.hpp"
#include "spinorforge/errors.hpp"

#include <cmath>
#include <json.hpp>

namespace spinorforge {

namespace {

const std::pair<GroupTag, const char *> kTagNames[] = {
    {GroupTag::Rn, "rn"},       {GroupTag::Hn, "hn"},
    {GroupTag::S3, "s3"},       {GroupTag::EKappaTau, "ekt"},
    {GroupTag::SemiDirect, "semidirect"}, {GroupTag::Sol3, "sol3"},
    {GroupTag::H2xR, "h2xr"},   {GroupTag::Unimodular, "unimodular"},
};

int eps3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

} // namespace

std::string tag_name(GroupTag t) {
  for (auto &[tag, name] : kTagNames)
    if (tag == t) return name;
  return "?";
}

GroupTag parse_tag(const std::string &s) {
  for (auto &[tag, name] : kTagNames)
    if (s == name) return tag;
  throw InputError("unknown group tag: " + s);
}

std::vector<double> koszul_connection(int n, const std::vector<double> &c) {
  auto C = [&](int i, int j, int k) { return c[(i * n + j) * n + k]; };
  std::vector<double> g(c.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        g[(i * n + j) * n + k] = 0.5 * (C(i, j, k) + C(k, i, j) - C(j, k, i));
  return g;
}

MetricLieAlgebra::MetricLieAlgebra(int n, std::vector<double> consts, GroupTag tag,
                                   CatalogParams params)
    : n_(n), c_(std::move(consts)), tag_(tag), params_(std::move(params)) {
  if (n < 1 || n > kMaxCliffordDim) throw InputError("algebra dimension must be in [1, 8]");
  if (c_.size() != static_cast<std::size_t>(n * n * n))
    throw InputError("structure constants must have n^3 entries");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (c(i, j, k) != -c(j, i, k)) throw InputError("structure constants are not antisymmetric");
  if (jacobi_residual() > 1e-12) throw InputError("structure constants violate the Jacobi identity");
  g_ = koszul_connection(n, c_);
}

Eigen::VectorXd MetricLieAlgebra::bracket(const Eigen::VectorXd &X, const Eigen::VectorXd &Y) const {
  return ad(X) * Y;
}

Eigen::MatrixXd MetricLieAlgebra::ad(const Eigen::VectorXd &X) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    if (X[i] == 0.0) continue;
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) m(k, j) += X[i] * c(i, j, k);
  }
  return m;
}

Eigen::MatrixXd MetricLieAlgebra::gamma_op(const Eigen::VectorXd &X) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    if (X[i] == 0.0) continue;
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) m(k, j) += X[i] * gamma(i, j, k);
  }
  return m;
}

double MetricLieAlgebra::jacobi_residual() const {
  double r = 0;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int d = 0; d < n_; ++d)
        for (int m = 0; m < n_; ++m) {
          // [[e_a,e_b],e_d] + cyclic, component m
          double s = 0;
          for (int k = 0; k < n_; ++k)
            s += c(a, b, k) * c(k, d, m) + c(b, d, k) * c(k, a, m) + c(d, a, k) * c(k, b, m);
          r = std::max(r, std::abs(s));
        }
  return r;
}

Eigen::VectorXd torsion_residual(const MetricLieAlgebra &alg, const Eigen::VectorXd &X,
                                 const Eigen::VectorXd &Y) {
  return alg.gamma_op(X) * Y - alg.gamma_op(Y) * X - alg.bracket(X, Y);
}

Eigen::MatrixXd curvature(const MetricLieAlgebra &alg, const Eigen::VectorXd &X,
                          const Eigen::VectorXd &Y) {
  Eigen::MatrixXd gx = alg.gamma_op(X), gy = alg.gamma_op(Y);
  return gx * gy - gy * gx - alg.gamma_op(alg.bracket(X, Y));
}

double sectional_curvature(const MetricLieAlgebra &alg, const Eigen::VectorXd &X,
                           const Eigen::VectorXd &Y) {
  double den = X.squaredNorm() * Y.squaredNorm() - std::pow(X.dot(Y), 2);
  if (den <= 1e-14 * X.squaredNorm() * Y.squaredNorm())
    throw InputError("sectional curvature of a degenerate plane");
  return (curvature(alg, X, Y) * Y).dot(X) / den;
}

MetricLieAlgebra catalog_build(GroupTag tag, const CatalogParams &p) {
  int n = 3;
  if (tag == GroupTag::Rn || tag == GroupTag::Hn) n = p.n;
  if (n < 1 || n > kMaxCliffordDim) throw InputError("catalog dimension must be in [1, 8]");
  std::vector<double> c(n * n * n, 0.0);
  auto C = [&](int i, int j, int k, double v) {
    c[(i * n + j) * n + k] = v;
    c[(j * n + i) * n + k] = 0.0 - v;
  };
  CatalogParams q = p;
  q.n = n;
  switch (tag) {
  case GroupTag::Rn:
    break;
  case GroupTag::Hn: {
    if (n < 2) throw InputError("hyperbolic space needs n >= 2");
    if (q.l.size() == 0) q.l = Eigen::VectorXd::Unit(n, n - 1);
    if (q.l.size() != n) throw InputError("linear form has wrong length");
    if (q.l.norm() == 0) throw InputError("linear form must be nonzero");
    // [X, Y] = l(X) Y - l(Y) X
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          c[(i * n + j) * n + k] = (j == k ? q.l[i] : 0.0) - (i == k ? q.l[j] : 0.0);
    break;
  }
  case GroupTag::S3:
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) c[(i * 3 + j) * 3 + k] = 2.0 * eps3(i, j, k);
    break;
  case GroupTag::EKappaTau: {
    if (q.tau == 0) throw InputError("E(kappa, tau) needs tau != 0");
    double s = q.sigma();
    C(0, 1, 2, 2 * q.tau);
    C(1, 2, 0, s);
    C(2, 0, 1, s);
    break;
  }
  case GroupTag::Sol3:
    q.A << -1, 0, 0, 1;
    [[fallthrough]];
  case GroupTag::H2xR:
    if (tag == GroupTag::H2xR) q.A << 1, 0, 0, 0;
    [[fallthrough]];
  case GroupTag::SemiDirect:
    C(2, 0, 0, q.A(0, 0));
    C(2, 0, 1, q.A(1, 0));
    C(2, 1, 0, q.A(0, 1));
    C(2, 1, 1, q.A(1, 1));
    break;
  case GroupTag::Unimodular:
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          if (eps3(i, j, k)) c[(i * 3 + j) * 3 + k] = eps3(i, j, k) * (q.mu[i] + q.mu[j]);
    break;
  }
  return MetricLieAlgebra(n, std::move(c), tag, q);
}

Multivector gamma_as_bivector(const MetricLieAlgebra &alg, const Eigen::VectorXd &X) {
  Eigen::MatrixXd g = alg.gamma_op(X);
  return bivector_of_skew(0.5 * (g - g.transpose()));
}

nlohmann::json params_to_json(GroupTag tag, const CatalogParams &p) {
  nlohmann::json j = nlohmann::json::object();
  switch (tag) {
  case GroupTag::Rn:
    j["n"] = p.n;
    break;
  case GroupTag::Hn:
    j["n"] = p.n;
    j["l"] = std::vector<double>(p.l.data(), p.l.data() + p.l.size());
    break;
  case GroupTag::EKappaTau:
    j["kappa"] = p.kappa;
    j["tau"] = p.tau;
    j["sigma"] = p.sigma();
    break;
  case GroupTag::SemiDirect:
  case GroupTag::Sol3:
  case GroupTag::H2xR:
    j["a"] = p.A(0, 0);
    j["b"] = p.A(0, 1);
    j["c"] = p.A(1, 0);
    j["d"] = p.A(1, 1);
    break;
  case GroupTag::Unimodular:
    j["mu"] = {p.mu[0], p.mu[1], p.mu[2]};
    break;
  case GroupTag::S3:
    break;
  }
  return j;
}

CatalogParams params_from_json(GroupTag tag, const nlohmann::json &j) {
  CatalogParams p;
  if (j.is_null()) return p;
  p.n = j.value("n", 3);
  if (j.contains("l")) {
    auto l = j.at("l").get<std::vector<double>>();
    p.l = Eigen::Map<Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size()));
  }
  p.kappa = j.value("kappa", 0.0);
  p.tau = j.value("tau", 1.0);
  if (tag == GroupTag::SemiDirect || tag == GroupTag::Sol3 || tag == GroupTag::H2xR)
    p.A << j.value("a", 0.0), j.value("b", 0.0), j.value("c", 0.0), j.value("d", 0.0);
  if (j.contains("mu")) {
    auto m = j.at("mu").get<std::vector<double>>();
    if (m.size() != 3) throw InputError("mu needs three entries");
    p.mu = Eigen::Vector3d(m[0], m[1], m[2]);
  }
  return p;
}

nlohmann::json to_json(const MetricLieAlgebra &alg) {
  const int n = alg.dim();
  auto cube = [n](auto get) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json b = nlohmann::json::array();
      for (int j = 0; j < n; ++j) {
        nlohmann::json r = nlohmann::json::array();
        for (int k = 0; k < n; ++k) r.push_back(get(i, j, k));
        b.push_back(r);
      }
      a.push_back(b);
    }
    return a;
  };
  return {{"tag", tag_name(alg.tag())},
          {"params", params_to_json(alg.tag(), alg.params())},
          {"c", cube([&](int i, int j, int k) { return alg.c(i, j, k); })},
          {"gamma", cube([&](int i, int j, int k) { return alg.gamma(i, j, k); })}};
}

MetricLieAlgebra algebra_from_json(const nlohmann::json &j) {
  try {
    GroupTag tag = parse_tag(j.at("tag").get<std::string>());
    CatalogParams p = params_from_json(tag, j.value("params", nlohmann::json::object()));
    if (!j.contains("c")) return catalog_build(tag, p);
    auto c3 = j.at("c").get<std::vector<std::vector<std::vector<double>>>>();
    const int n = static_cast<int>(c3.size());
    std::vector<double> c;
    for (auto &a : c3) {
      if (static_cast<int>(a.size()) != n) throw InputError("structure constants are not n x n x n");
      for (auto &b : a) {
        if (static_cast<int>(b.size()) != n) throw InputError("structure constants are not n x n x n");
        c.insert(c.end(), b.begin(), b.end());
      }
    }
    p.n = n;
    return MetricLieAlgebra(n, std::move(c), tag, p);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("algebra json: ") + e.what());
  }
}

} // namespace spinorforge
