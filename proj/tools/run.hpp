#pragma once
#include "spinorforge/mesh_export.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace spinorforge::cli {

enum Exit { Ok = 0, AboveTolerance = 2, BadInput = 3, NumericalFailure = 4 };

// Unset tolerances default to 10 h^2 on grids and 1e-10 for algebra identities and spin norms.
struct Tolerances {
  std::optional<double> holonomy, structure, spin_norm;
};

struct RunConfig {
  std::string command;
  std::string input_path, output_path, report_path, map_path, fields_dir;
  Tolerances tol;
  // catalog / check-algebra without an input file
  std::string group, params_json;
  bool json = false;
  // fixture generator
  std::string fixture_name;
  int grid_n = 32;
  double codazzi_break = 0;
  std::optional<MeshFormat> format; // default: from the output extension, else obj
  Eigen::Vector4d pole{-1, 0, 0, 0};
  bool verbose = false;
};

// Throws InputError for violated invariants (non-positive tolerances, missing paths).
void validate(const RunConfig &c);
// Runs one command; library errors are mapped to exit codes, messages go to stderr.
int run(const RunConfig &c);

// Embedded JSON schemas by name ("algebra", "grid", "problem", "cmc", "map", "spinor", "report").
const char *schema_text(const std::string &name);
std::vector<std::string> schema_names();

} // namespace spinorforge::cli
