#pragma once
#include "spinorforge/grid.hpp"
#include "spinorforge/lie_algebra.hpp"
#include "spinorforge/lie_group.hpp"

#include <Eigen/Dense>
#include <array>
#include <json.hpp>
#include <string>
#include <vector>

namespace spinorforge {

// Triangle mesh of a grid map: vertex v = grid index, each quad split along its (i,j)-(i+1,j+1)
// diagonal, counter-clockwise in the parameter plane.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Vertices from embed_r3; quaternion points are projected from `pole`.
Mesh grid_mesh(const std::vector<GroupElement> &F, const ParamGrid &grid,
               const Eigen::Vector4d &pole = {-1, 0, 0, 0});

enum class MeshFormat { Obj, Ply };
MeshFormat parse_mesh_format(const std::string &s);

// OBJ with %.17g coordinates and 1-based faces; PLY is binary little-endian with double
// vertices and int32 faces. Unwritable paths throw InputError.
void write_obj(const Mesh &m, const std::string &path);
void write_ply(const Mesh &m, const std::string &path);
void write_mesh(const Mesh &m, const std::string &path, MeshFormat fmt);

// Grid map file: {"algebra", "grid", "points": [[...], ...]}, points in the model payload layout.
nlohmann::json map_to_json(const std::vector<GroupElement> &F, const ParamGrid &grid,
                           const MetricLieAlgebra &alg);
struct GridMap {
  MetricLieAlgebra alg;
  ParamGrid grid;
  std::vector<GroupElement> F;
};
GridMap map_from_json(const nlohmann::json &j);

} // namespace spinorforge
