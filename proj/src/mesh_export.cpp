#include "spinorforge/mesh_export.hpp"

#include "spinorforge/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace spinorforge {

namespace {

template <class T>
void put_le(std::ofstream &out, T value) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(b[k], b[sizeof(T) - 1 - k]);
  out.write(reinterpret_cast<const char *>(b), sizeof(T));
}

} // namespace

Mesh grid_mesh(const std::vector<GroupElement> &F, const ParamGrid &grid, const Eigen::Vector4d &pole) {
  grid.validate();
  if (static_cast<int>(F.size()) != grid.size()) throw InputError("map has the wrong number of vertices");
  Mesh m;
  m.vertices.reserve(F.size());
  for (const auto &g : F) m.vertices.push_back(embed_r3(g, pole));
  for (int j = 0; j + 1 < grid.ny; ++j)
    for (int i = 0; i + 1 < grid.nx; ++i) {
      const int a = grid.idx(i, j), b = grid.idx(i + 1, j), c = grid.idx(i + 1, j + 1), d = grid.idx(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  return m;
}

MeshFormat parse_mesh_format(const std::string &s) {
  if (s == "obj") return MeshFormat::Obj;
  if (s == "ply") return MeshFormat::Ply;
  throw InputError("unknown mesh format '" + s + "' (obj or ply)");
}

void write_obj(const Mesh &m, const std::string &path) {
  std::unique_ptr<FILE, int (*)(FILE *)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw InputError("cannot write '" + path + "'");
  for (const auto &v : m.vertices) std::fprintf(f.get(), "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
  for (const auto &t : m.triangles) std::fprintf(f.get(), "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
  if (std::ferror(f.get())) throw InputError("write to '" + path + "' failed");
}

void write_ply(const Mesh &m, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << m.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << m.triangles.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  for (const auto &v : m.vertices)
    for (int k = 0; k < 3; ++k) put_le(out, v[k]);
  for (const auto &t : m.triangles) {
    put_le(out, static_cast<std::uint8_t>(3));
    for (int k = 0; k < 3; ++k) put_le(out, static_cast<std::int32_t>(t[k]));
  }
  if (!out) throw InputError("write to '" + path + "' failed");
}

void write_mesh(const Mesh &m, const std::string &path, MeshFormat fmt) {
  if (fmt == MeshFormat::Obj) write_obj(m, path);
  else write_ply(m, path);
}

nlohmann::json map_to_json(const std::vector<GroupElement> &F, const ParamGrid &grid,
                           const MetricLieAlgebra &alg) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto &g : F) pts.push_back(std::vector<double>(g.p.data(), g.p.data() + g.p.size()));
  return {{"algebra", to_json(alg)}, {"grid", to_json(grid)}, {"points", pts}};
}

GridMap map_from_json(const nlohmann::json &j) {
  try {
    GridMap out{algebra_from_json(j.at("algebra")), grid_from_json(j.at("grid")), {}};
    const GroupModel model = model_of(out.alg);
    const int len = model == GroupModel::Quaternion ? 4 : out.alg.dim();
    const auto &pts = j.at("points");
    if (!pts.is_array() || static_cast<int>(pts.size()) != out.grid.size())
      throw InputError("map needs one point per grid vertex");
    for (const auto &p : pts) {
      const auto v = p.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != len) throw InputError("map point has the wrong length");
      for (double x : v)
        if (!std::isfinite(x)) throw InputError("map point is not finite");
      out.F.push_back({model, Eigen::Map<const Eigen::VectorXd>(v.data(), len)});
    }
    return out;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("map json: ") + e.what());
  }
}

} // namespace spinorforge
