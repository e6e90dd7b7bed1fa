#include "run.hpp"

#include "spinorforge/cmc_weierstrass.hpp"
#include "spinorforge/errors.hpp"
#include "spinorforge/fixtures.hpp"
#include "spinorforge/immersion_data.hpp"
#include "spinorforge/lie_algebra.hpp"
#include "spinorforge/lie_group.hpp"
#include "spinorforge/spinor_killing.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace spinorforge::cli {

namespace {

using json = nlohmann::json;

std::string num(double x) { return json(x).dump(); }

json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

void write_json(const std::string &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

// Residual report: one entry per check plus the artifacts written.
class Report {
public:
  Report(const RunConfig &c, std::optional<double> h) : cfg_(c) {
    j_["schema"] = "urn:spinorforge:report:1";
    j_["command"] = c.command;
    if (h) j_["h"] = *h;
    j_["checks"] = json::object();
    j_["outputs"] = json::object();
  }

  void add(const std::string &name, const std::vector<double> &field, double tol) {
    const ResidualSummary s = summarize(field);
    json path = nullptr;
    if (!cfg_.fields_dir.empty()) {
      const std::string p = (std::filesystem::path(cfg_.fields_dir) / (name + ".csv")).string();
      std::ostringstream out;
      out << "index,value\n";
      for (std::size_t k = 0; k < field.size(); ++k) out << k << "," << num(field[k]) << "\n";
      write_text(p, out.str());
      path = p;
    }
    record(name, s.max, s.mean, tol, path);
  }

  void add_scalar(const std::string &name, double value, double tol) { record(name, value, value, tol, nullptr); }

  void output(const std::string &kind, const std::string &path) { j_["outputs"][kind] = path; }
  void not_integrable() { integrable_ = false; }

  int finish() {
    const bool ok = integrable_ && all_pass_;
    j_["status"] = !integrable_ ? "not-integrable" : (ok ? "ok" : "above-tolerance");
    const std::string text = j_.dump(2) + "\n";
    if (cfg_.report_path.empty()) std::fputs(text.c_str(), stdout);
    else write_text(cfg_.report_path, text);
    return ok ? Ok : AboveTolerance;
  }

private:
  void record(const std::string &name, double max, double mean, double tol, json path) {
    const bool pass = std::isfinite(max) && max <= tol;
    all_pass_ = all_pass_ && pass;
    j_["checks"][name] = {{"max", max}, {"mean", mean}, {"tolerance", tol}, {"pass", pass}, {"field_path", path}};
    if (cfg_.verbose)
      std::fprintf(stderr, "[%s] %s max=%s mean=%s tol=%s%s\n", cfg_.command.c_str(), name.c_str(), num(max).c_str(),
                   num(mean).c_str(), num(tol).c_str(), pass ? "" : " FAIL");
  }

  const RunConfig &cfg_;
  json j_;
  bool all_pass_ = true, integrable_ = true;
};

void stage(const RunConfig &c, const std::string &msg) {
  if (c.verbose) std::fprintf(stderr, "[%s] %s\n", c.command.c_str(), msg.c_str());
}

double grid_tol(const std::optional<double> &t, const ParamGrid &g) { return t ? *t : 10 * g.h * g.h; }
double exact_tol(const std::optional<double> &t) { return t ? *t : 1e-10; }

MetricLieAlgebra algebra_arg(const RunConfig &c) {
  if (!c.input_path.empty()) return algebra_from_json(read_json(c.input_path));
  if (c.group.empty()) throw InputError("give --group or --input");
  const GroupTag tag = parse_tag(c.group);
  json params = json::object();
  if (!c.params_json.empty()) {
    try {
      params = json::parse(c.params_json);
    } catch (const json::exception &e) {
      throw InputError(std::string("--params: ") + e.what());
    }
  }
  return catalog_build(tag, params_from_json(tag, params));
}

KillingProblem problem_arg(const RunConfig &c) {
  const json j = read_json(c.input_path);
  if (!j.is_object() || !j.contains("algebra") || !j.contains("immersion"))
    throw InputError("problem file needs 'algebra' and 'immersion'");
  MetricLieAlgebra alg = algebra_from_json(j["algebra"]);
  ImmersionData d = immersion_from_json(j["immersion"]);
  if (d.n != alg.dim()) throw InputError("immersion and algebra dimensions differ");
  return make_problem(std::move(d), std::move(alg));
}

MeshFormat mesh_format(const RunConfig &c) {
  if (c.format) return *c.format;
  return std::filesystem::path(c.output_path).extension() == ".ply" ? MeshFormat::Ply : MeshFormat::Obj;
}

std::vector<double> norms(const std::vector<Eigen::VectorXd> &v) {
  std::vector<double> out;
  for (const auto &x : v) out.push_back(x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
  return out;
}

std::vector<double> spin_norm_field(const SpinorField &f) {
  std::vector<double> out;
  for (const auto &phi : f.phi) out.push_back((reversal(phi) * phi - Multivector::scalar(f.n, 1)).max_abs());
  return out;
}

json spinor_to_json(const SpinorField &f) {
  json phi = json::array();
  for (const auto &x : f.phi) phi.push_back(x.coeffs());
  return {{"grid", to_json(f.grid)}, {"n", f.n}, {"phi", phi}};
}

// commands

int cmd_catalog(const RunConfig &c) {
  const MetricLieAlgebra alg = algebra_arg(c);
  if (c.json) {
    std::printf("%s\n", to_json(alg).dump(2).c_str());
    return Ok;
  }
  const int n = alg.dim();
  std::printf("group %s, dimension %d\n", tag_name(alg.tag()).c_str(), n);
  std::printf("structure constants [e_i, e_j] = sum_k c_ij^k e_k (i < j, nonzero):\n");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (alg.c(i, j, k) != 0) std::printf("  c_%d%d^%d = %s\n", i + 1, j + 1, k + 1, num(alg.c(i, j, k)).c_str());
  std::printf("connection Gamma(e_i) e_j = sum_k Gamma_ij^k e_k (nonzero):\n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (alg.gamma(i, j, k) != 0)
          std::printf("  Gamma_%d%d^%d = %s\n", i + 1, j + 1, k + 1, num(alg.gamma(i, j, k)).c_str());
  return Ok;
}

int cmd_check_algebra(const RunConfig &c) {
  const MetricLieAlgebra alg = algebra_arg(c);
  const double tol = exact_tol(c.tol.structure);
  Report r(c, std::nullopt);
  const int n = alg.dim();
  std::vector<double> torsion, metric, curv_pair, curv_skew;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd X = Eigen::VectorXd::Unit(n, i);
    const Eigen::MatrixXd G = alg.gamma_op(X);
    metric.push_back((G + G.transpose()).cwiseAbs().maxCoeff());
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd Y = Eigen::VectorXd::Unit(n, j);
      torsion.push_back(torsion_residual(alg, X, Y).cwiseAbs().maxCoeff());
      const Eigen::MatrixXd R = curvature(alg, X, Y);
      curv_pair.push_back((R + curvature(alg, Y, X)).cwiseAbs().maxCoeff());
      curv_skew.push_back((R + R.transpose()).cwiseAbs().maxCoeff());
    }
  }
  r.add_scalar("jacobi", alg.jacobi_residual(), tol);
  r.add("torsion", torsion, tol);
  r.add("metric_compatibility", metric, tol);
  r.add("curvature_pair_antisymmetry", curv_pair, tol);
  r.add("curvature_operator_skew", curv_skew, tol);
  return r.finish();
}

int cmd_check_frame(const RunConfig &c) {
  const KillingProblem p = problem_arg(c);
  const ParamGrid &g = p.data.grid;
  Report r(c, g.h);
  std::vector<double> ortho;
  for (int v = 0; v < g.size(); ++v) {
    const Eigen::MatrixXd &F = p.data.frame[v];
    ortho.push_back((F.transpose() * F - Eigen::MatrixXd::Identity(F.cols(), F.cols())).cwiseAbs().maxCoeff());
  }
  r.add("orthonormality", ortho, exact_tol(c.tol.spin_norm));
  if (p.data.q == 1) {
    const FrameCompatResiduals fc = frame_compat_residuals(p.data, p.alg);
    r.add("frame_tangent", fc.tangent, grid_tol(c.tol.structure, g));
    r.add("frame_function", fc.function, grid_tol(c.tol.structure, g));
  }
  return r.finish();
}

int cmd_check_gcr(const RunConfig &c) {
  const KillingProblem p = problem_arg(c);
  const ParamGrid &g = p.data.grid;
  Report r(c, g.h);
  const double tol = grid_tol(c.tol.structure, g);
  stage(c, "Gauss-Codazzi-Ricci residuals");
  const GCRResiduals gcr = gcr_residuals(p.data, p.alg).interior(g);
  std::vector<double> gauss;
  for (double x : gcr.gauss) gauss.push_back(std::abs(x));
  r.add("gauss", gauss, tol);
  r.add("codazzi", norms(gcr.codazzi), tol);
  if (p.data.q > 1) {
    std::vector<double> ricci;
    for (const auto &m : gcr.ricci) ricci.push_back(m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
    r.add("ricci", ricci, tol);
  }
  stage(c, "spinor transport and plaquette holonomy");
  const HolonomyReport h = solve_killing(p, grid_tol(c.tol.holonomy, g)).holonomy;
  r.add("holonomy", h.plaquette, h.threshold);
  if (!h.integrable) r.not_integrable();
  return r.finish();
}

int cmd_solve(const RunConfig &c) {
  const KillingProblem p = problem_arg(c);
  const ParamGrid &g = p.data.grid;
  Report r(c, g.h);
  stage(c, "spinor transport");
  const KillingSolution s = solve_killing(p, grid_tol(c.tol.holonomy, g));
  const SpinorField phi = normalize_spinor(s.field, p);
  r.add("holonomy", s.holonomy.plaquette, s.holonomy.threshold);
  r.add("killing", killing_residual(phi, p), grid_tol(c.tol.structure, g));
  r.add("spin_norm", spin_norm_field(phi), exact_tol(c.tol.spin_norm));
  if (!s.holonomy.integrable) r.not_integrable();
  write_json(c.output_path, spinor_to_json(phi));
  r.output("spinor", c.output_path);
  return r.finish();
}

int cmd_reconstruct(const RunConfig &c) {
  const KillingProblem p = problem_arg(c);
  const ParamGrid &g = p.data.grid;
  Report r(c, g.h);
  const double tol = grid_tol(c.tol.structure, g);
  ReconstructOptions opt;
  opt.holonomy_threshold = grid_tol(c.tol.holonomy, g);
  opt.structure_tolerance = tol;
  stage(c, "spinor transport and Darboux integration");
  const ReconstructReport rec = reconstruct_immersion(p, opt);
  r.add("holonomy", rec.solution.holonomy.plaquette, rec.solution.holonomy.threshold);
  stage(c, "structure residual of the spinorial one-form");
  const SpinorField phi = normalize_spinor(rec.solution.field, p);
  r.add("structure", structure_residual(xi_from_spinor(phi, p), p.alg), tol);
  r.add_scalar("isometry", rec.isometry_error, tol);
  r.add_scalar("second_fundamental_form", rec.sff_error, tol);
  if (p.data.q > 1) r.add_scalar("normal_connection", rec.normal_connection_error, tol);
  if (!rec.integrable) r.not_integrable();
  write_mesh(grid_mesh(rec.F, g, c.pole), c.output_path, mesh_format(c));
  r.output("mesh", c.output_path);
  if (!c.map_path.empty()) {
    write_json(c.map_path, map_to_json(rec.F, g, p.alg));
    r.output("map", c.map_path);
  }
  return r.finish();
}

int cmd_cmc(const RunConfig &c) {
  const json j = read_json(c.input_path);
  ParamGrid grid;
  std::vector<cplx> gauss;
  HPotential pot;
  try {
    grid = grid_from_json(j.at("grid"));
    for (const auto &z : j.at("g")) {
      const auto p = z.get<std::vector<double>>();
      if (p.size() != 2) throw InputError("g samples are [re, im] pairs");
      gauss.emplace_back(p[0], p[1]);
    }
    pot.H = j.at("H").get<double>();
    if (j.contains("mu")) {
      const auto m = j.at("mu").get<std::vector<double>>();
      if (m.size() != 3) throw InputError("mu needs three entries");
      pot.mu = Eigen::Vector3d(m[0], m[1], m[2]);
    }
  } catch (const json::exception &e) {
    throw InputError(std::string("cmc json: ") + e.what());
  }
  Report r(c, grid.h);
  const double tol = grid_tol(c.tol.structure, grid);
  stage(c, "Weierstrass density from the Gauss map");
  const WeierstrassData d = weierstrass_from_g(grid, gauss, pot);
  r.add("gauss_map_pde", gauss_map_pde_residual(d, pot), tol);
  r.add("density_consistency", weier_f_from_g(d, pot).residual, tol);
  CatalogParams cp;
  cp.mu = pot.mu;
  const MetricLieAlgebra alg = catalog_build(GroupTag::Unimodular, cp);
  const LieValuedOneForm xi = xi_from_weierstrass(d);
  r.add("structure", structure_residual(xi, alg), tol);
  if (!c.output_path.empty()) {
    stage(c, "Darboux integration");
    const std::vector<GroupElement> F = darboux_integrate(xi, alg, group_identity(alg)).F;
    if (pot.mu.isZero(0)) {
      std::vector<Eigen::Vector3d> P;
      for (const auto &x : F) P.push_back(x.p.head<3>());
      const std::vector<double> H = discrete_mean_curvature(P, d.grid, d.nu);
      std::vector<double> dev;
      for (int jj = 1; jj + 1 < grid.ny; ++jj)
        for (int i = 1; i + 1 < grid.nx; ++i) dev.push_back(std::abs(H[grid.idx(i, jj)] - pot.H));
      r.add("mean_curvature_deviation", dev, 1e-2 * std::max(1.0, std::abs(pot.H)));
    }
    write_mesh(grid_mesh(F, d.grid, c.pole), c.output_path, mesh_format(c));
    r.output("mesh", c.output_path);
    if (!c.map_path.empty()) {
      write_json(c.map_path, map_to_json(F, d.grid, alg));
      r.output("map", c.map_path);
    }
  }
  return r.finish();
}

int cmd_export(const RunConfig &c) {
  const GridMap m = map_from_json(read_json(c.input_path));
  write_mesh(grid_mesh(m.F, m.grid, c.pole), c.output_path, mesh_format(c));
  Report r(c, m.grid.h);
  r.output("mesh", c.output_path);
  return r.finish();
}

json cmc_sphere_input(int N) {
  ParamGrid g(N + 1, N + 1, 1.0 / N, -0.5, -0.5);
  json gs = json::array();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) gs.push_back({g.x(i), g.y(j)});
  return {{"grid", to_json(g)}, {"g", gs}, {"H", 1.0}, {"mu", {0.0, 0.0, 0.0}}};
}

int cmd_fixture(const RunConfig &c) {
  if (c.grid_n < 2) throw InputError("--n must be at least 2");
  json out;
  if (c.fixture_name == "cmc_sphere") {
    out = cmc_sphere_input(c.grid_n);
  } else {
    const Fixture f = c.fixture_name == "sphere" ? sphere_fixture(c.grid_n, 1.0, c.codazzi_break)
                                                 : make_fixture(c.fixture_name, c.grid_n);
    out = {{"name", f.name}, {"algebra", to_json(f.alg)}, {"immersion", to_json(f.data)}};
  }
  write_json(c.output_path, out);
  return Ok;
}

bool needs_output(const std::string &cmd) {
  return cmd == "solve" || cmd == "reconstruct" || cmd == "export" || cmd == "fixture";
}

} // namespace

void validate(const RunConfig &c) {
  for (const auto *t : {&c.tol.holonomy, &c.tol.structure, &c.tol.spin_norm})
    if (*t && !(**t > 0 && std::isfinite(**t))) throw InputError("tolerances must be positive");
  const bool file_cmd = c.command != "catalog" && c.command != "check-algebra" && c.command != "fixture";
  if (file_cmd && c.input_path.empty()) throw InputError(c.command + " needs --input");
  if (needs_output(c.command) && c.output_path.empty()) throw InputError(c.command + " needs --output");
  if (c.command == "fixture" && c.fixture_name.empty()) throw InputError("fixture needs --name");
  if (!(c.pole.norm() > 0) || !c.pole.allFinite()) throw InputError("projection pole must be a nonzero quaternion");
}

int run(const RunConfig &c) {
  try {
    validate(c);
    if (c.command == "catalog") return cmd_catalog(c);
    if (c.command == "check-algebra") return cmd_check_algebra(c);
    if (c.command == "check-frame") return cmd_check_frame(c);
    if (c.command == "check-gcr") return cmd_check_gcr(c);
    if (c.command == "solve") return cmd_solve(c);
    if (c.command == "reconstruct") return cmd_reconstruct(c);
    if (c.command == "cmc") return cmd_cmc(c);
    if (c.command == "export") return cmd_export(c);
    if (c.command == "fixture") return cmd_fixture(c);
    throw InputError("unknown command '" + c.command + "'");
  } catch (const InputError &e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return BadInput;
  } catch (const NumericalError &e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return NumericalFailure;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return NumericalFailure;
  }
}

namespace {

#include "schemas.inc"

} // namespace

const char *schema_text(const std::string &name) {
  for (const auto &s : kSchemas)
    if (name == s.name) return s.text;
  throw InputError("unknown schema '" + name + "'");
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto &s : kSchemas) out.push_back(s.name);
  return out;
}

} // namespace spinorforge::cli
