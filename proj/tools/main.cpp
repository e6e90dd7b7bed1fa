#include "run.hpp"

#include "spinorforge/errors.hpp"
#include "spinorforge/fixtures.hpp"

#include <CLI11.hpp>
#include <cstdio>

using spinorforge::cli::RunConfig;

namespace {

Eigen::Vector4d parse_pole(const std::string &s) {
  Eigen::Vector4d q;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf%c", &q[0], &q[1], &q[2], &q[3], &tail) != 4)
    throw spinorforge::InputError("--pole expects w,x,y,z");
  return q;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Spinorial representation of surfaces in metric Lie groups"};
  app.require_subcommand(0, 1);
  RunConfig cfg;
  std::string schema, pole, format;
  app.add_option("--schema", schema, "print a JSON schema ('all' for every schema)");

  auto io = [&](CLI::App *s, bool output) {
    s->add_option("-i,--input", cfg.input_path, "input JSON file");
    if (output) s->add_option("-o,--output", cfg.output_path, "output file");
    s->add_option("--report", cfg.report_path, "residual report path (default: stdout)");
    s->add_option("--fields", cfg.fields_dir, "directory for per-vertex residual CSV files")->check(CLI::ExistingDirectory);
    s->add_option("--tol-holonomy", cfg.tol.holonomy, "plaquette holonomy tolerance (default 10 h^2)");
    s->add_option("--tol-structure", cfg.tol.structure, "structure and compatibility tolerance (default 10 h^2, 1e-10 for algebras)");
    s->add_option("--tol-spin-norm", cfg.tol.spin_norm, "spin norm and orthonormality tolerance (default 1e-10)");
    s->add_flag("-v,--verbose", cfg.verbose, "per-stage residual summaries on stderr");
  };
  auto mesh = [&](CLI::App *s) {
    s->add_option("--format", format, "mesh format (default from the extension)")->check(CLI::IsMember({"obj", "ply"}));
    s->add_option("--pole", pole, "S^3 projection pole w,x,y,z (default -1,0,0,0)");
    s->add_option("--map", cfg.map_path, "also write the grid map as JSON");
  };

  auto *catalog = app.add_subcommand("catalog", "print structure constants and connection coefficients");
  catalog->add_option("-g,--group", cfg.group, "rn, hn, s3, ekt, semidirect, sol3, h2xr, unimodular");
  catalog->add_option("-p,--params", cfg.params_json, "catalog parameters as JSON");
  catalog->add_option("-i,--input", cfg.input_path, "algebra JSON file");
  catalog->add_flag("--json", cfg.json, "print the algebra as JSON");

  auto *check_algebra = app.add_subcommand("check-algebra", "Jacobi, torsion, metric and curvature identities");
  check_algebra->add_option("-g,--group", cfg.group, "catalog group");
  check_algebra->add_option("-p,--params", cfg.params_json, "catalog parameters as JSON");
  io(check_algebra, false);

  io(app.add_subcommand("check-frame", "frame orthonormality and compatibility residuals"), false);
  io(app.add_subcommand("check-gcr", "Gauss-Codazzi-Ricci residuals and spinor holonomy"), false);
  io(app.add_subcommand("solve", "solve for the spinor field and write it as JSON"), true);
  auto *reconstruct = app.add_subcommand("reconstruct", "reconstruct the immersion and write a mesh");
  io(reconstruct, true);
  mesh(reconstruct);
  auto *cmc = app.add_subcommand("cmc", "constant mean curvature surface from a Gauss map");
  io(cmc, true);
  mesh(cmc);
  auto *exp = app.add_subcommand("export", "convert a grid map JSON to OBJ or PLY");
  io(exp, true);
  mesh(exp);

  auto *fixture = app.add_subcommand("fixture", "write an analytic fixture as an input file");
  auto names = spinorforge::fixture_names();
  names.push_back("cmc_sphere");
  fixture->add_option("--name", cfg.fixture_name, "fixture name")->check(CLI::IsMember(names));
  fixture->add_option("-n,--n", cfg.grid_n, "grid intervals per side");
  fixture->add_option("--codazzi-break", cfg.codazzi_break, "sphere only: add eps * y to S_11");
  fixture->add_option("-o,--output", cfg.output_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spinorforge::cli::BadInput;
  }

  try {
    if (!schema.empty()) {
      if (schema == "all")
        for (const auto &n : spinorforge::cli::schema_names()) std::printf("%s\n", spinorforge::cli::schema_text(n));
      else
        std::printf("%s\n", spinorforge::cli::schema_text(schema));
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::fputs(app.help().c_str(), stderr);
      return spinorforge::cli::BadInput;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (!format.empty()) cfg.format = spinorforge::parse_mesh_format(format);
    if (!pole.empty()) cfg.pole = parse_pole(pole);
  } catch (const spinorforge::InputError &e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return spinorforge::cli::BadInput;
  }
  return spinorforge::cli::run(cfg);
}
