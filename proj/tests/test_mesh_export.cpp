#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinorforge/errors.hpp"
#include "spinorforge/fixtures.hpp"
#include "spinorforge/mesh_export.hpp"
#include "spinorforge/spinor_killing.hpp"
#include "support.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace spinorforge;

namespace {

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("sf_mesh_" + name)).string();
}

// Independent readers: plain OBJ "v"/"f" lines and the binary PLY layout written by write_ply.
Mesh read_obj(const std::string &path) {
  Mesh m;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream s(line);
    std::string tag;
    s >> tag;
    if (tag == "v") {
      Eigen::Vector3d v;
      s >> v[0] >> v[1] >> v[2];
      m.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> t;
      s >> t[0] >> t[1] >> t[2];
      for (int &k : t) --k;
      m.triangles.push_back(t);
    }
  }
  return m;
}

Mesh read_ply(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::string line;
  std::size_t nv = 0, nf = 0;
  bool little = false;
  while (std::getline(in, line) && line != "end_header") {
    if (line == "format binary_little_endian 1.0") little = true;
    std::sscanf(line.c_str(), "element vertex %zu", &nv);
    std::sscanf(line.c_str(), "element face %zu", &nf);
  }
  REQUIRE(little);
  auto le = [&](int bytes) {
    unsigned char b[8] = {};
    in.read(reinterpret_cast<char *>(b), bytes);
    std::uint64_t x = 0;
    for (int k = bytes - 1; k >= 0; --k) x = (x << 8) | b[k];
    return x;
  };
  Mesh m;
  for (std::size_t v = 0; v < nv; ++v) {
    Eigen::Vector3d p;
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t bits = le(8);
      std::memcpy(&p[k], &bits, 8);
    }
    m.vertices.push_back(p);
  }
  for (std::size_t f = 0; f < nf; ++f) {
    REQUIRE(le(1) == 3);
    std::array<int, 3> t;
    for (int &k : t) k = static_cast<std::int32_t>(le(4));
    m.triangles.push_back(t);
  }
  CHECK(in.peek() == EOF);
  return m;
}

// Index bounds, non-degenerate faces, and the edge multiplicities of a grid patch.
void validate_patch(const Mesh &m, const ParamGrid &g) {
  CHECK(m.vertices.size() == static_cast<std::size_t>(g.size()));
  CHECK(m.triangles.size() == static_cast<std::size_t>(2 * (g.nx - 1) * (g.ny - 1)));
  std::map<std::pair<int, int>, int> edges;
  for (const auto &t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      REQUIRE(t[k] >= 0);
      REQUIRE(t[k] < static_cast<int>(m.vertices.size()));
      const int a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
    const Eigen::Vector3d n =
        (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    CHECK(n.norm() > 0);
  }
  int boundary = 0;
  for (const auto &[e, count] : edges) {
    CHECK(count <= 2);
    boundary += count == 1;
  }
  CHECK(boundary == 2 * (g.nx - 1) + 2 * (g.ny - 1));
}

std::vector<GroupElement> abelian_map(const ParamGrid &g) {
  std::vector<GroupElement> F;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      F.push_back({GroupModel::Abelian, Eigen::Vector3d(g.x(i), g.y(j), g.x(i) * g.y(j))});
  return F;
}

} // namespace

TEST_CASE("2 x 2 grid gives 4 vertices and 2 triangles") {
  ParamGrid g(2, 2, 1.0);
  Mesh m = grid_mesh(abelian_map(g), g);
  CHECK(m.vertices.size() == 4);
  REQUIRE(m.triangles.size() == 2);
  CHECK(m.triangles[0] == std::array<int, 3>{0, 1, 3});
  CHECK(m.triangles[1] == std::array<int, 3>{0, 3, 2});
  validate_patch(m, g);
}

TEST_CASE("OBJ and PLY carry identical vertices") {
  ParamGrid g(7, 5, 0.13, -0.4, 0.2);
  std::vector<GroupElement> F = abelian_map(g);
  for (auto &x : F) x.p += sftest::random_vector(3) * 1e-3;
  Mesh m = grid_mesh(F, g);
  write_obj(m, temp_path("a.obj"));
  write_ply(m, temp_path("a.ply"));
  Mesh a = read_obj(temp_path("a.obj")), b = read_ply(temp_path("a.ply"));
  validate_patch(a, g);
  validate_patch(b, g);
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (std::size_t v = 0; v < a.vertices.size(); ++v) {
    CHECK((a.vertices[v] - b.vertices[v]).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(b.vertices[v] == m.vertices[v]);
  }
  CHECK(a.triangles == b.triangles);
}

TEST_CASE("reconstructed sphere exports to a valid patch") {
  Fixture f = sphere_fixture(16);
  ReconstructReport r = reconstruct_immersion(make_problem(f.data, f.alg));
  Mesh m = grid_mesh(r.F, f.data.grid);
  write_mesh(m, temp_path("s.ply"), MeshFormat::Ply);
  Mesh b = read_ply(temp_path("s.ply"));
  validate_patch(b, f.data.grid);
  // every vertex lies on a unit sphere, centered one unit along the inward normal at the base
  const Eigen::Vector3d c = b.vertices[0] + f.data.frame[0].col(2);
  for (const auto &v : b.vertices) CHECK((v - c).norm() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("S^3 points are projected from the chosen pole") {
  Fixture f = s3_equator_fixture(8);
  ReconstructReport r = reconstruct_immersion(make_problem(f.data, f.alg));
  Mesh m = grid_mesh(r.F, f.data.grid);
  validate_patch(m, f.data.grid);
  Mesh other = grid_mesh(r.F, f.data.grid, Eigen::Vector4d(0, 0, 0, 1));
  CHECK((m.vertices[5] - other.vertices[5]).norm() > 1e-3);
  std::vector<GroupElement> at_pole(f.data.grid.size(), GroupElement{GroupModel::Quaternion, Eigen::Vector4d(-1, 0, 0, 0)});
  CHECK_THROWS_AS(grid_mesh(at_pole, f.data.grid), NumericalError);
}

TEST_CASE("unwritable paths and bad formats are input errors") {
  ParamGrid g(2, 2, 1.0);
  Mesh m = grid_mesh(abelian_map(g), g);
  CHECK_THROWS_AS(write_obj(m, "/nonexistent-dir/x.obj"), InputError);
  CHECK_THROWS_AS(write_ply(m, "/nonexistent-dir/x.ply"), InputError);
  CHECK_THROWS_AS(parse_mesh_format("stl"), InputError);
  CHECK(parse_mesh_format("ply") == MeshFormat::Ply);
  CHECK_THROWS_AS(grid_mesh(std::vector<GroupElement>(3, abelian_map(g)[0]), g), InputError);
}

TEST_CASE("grid map JSON round trip") {
  Fixture f = sol3_cylinder_fixture(6);
  std::vector<GroupElement> F;
  for (int v = 0; v < f.data.grid.size(); ++v)
    F.push_back({GroupModel::SemiDirect, sftest::random_vector(3)});
  const nlohmann::json j = map_to_json(F, f.data.grid, f.alg);
  GridMap back = map_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.alg.tag() == GroupTag::Sol3);
  CHECK(back.grid.mu == f.data.grid.mu);
  for (std::size_t v = 0; v < F.size(); ++v) CHECK(back.F[v].p == F[v].p);
  nlohmann::json bad = j;
  bad["points"].erase(0);
  CHECK_THROWS_AS(map_from_json(bad), InputError);
  bad = j;
  bad["points"][0] = {1.0, 2.0};
  CHECK_THROWS_AS(map_from_json(bad), InputError);
  bad = j;
  bad["algebra"]["tag"] = "ekt";
  CHECK_THROWS_AS(map_from_json(bad), InputError);
  CHECK_THROWS_AS(map_from_json(nlohmann::json::object()), InputError);
}
