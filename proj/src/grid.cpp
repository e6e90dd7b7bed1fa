#include "spinorforge/grid.hpp"
#include "spinorforge/errors.hpp"

#include <cmath>
#include <json.hpp>
#include <string>

namespace spinorforge {

ParamGrid::ParamGrid(int nx_, int ny_, double h_, double x0_, double y0_)
    : nx(nx_), ny(ny_), h(h_), x0(x0_), y0(y0_) {
  validate();
}

void ParamGrid::validate() const {
  if (nx < 2 || ny < 2) throw InputError("grid needs at least 2 x 2 vertices");
  if (!(h > 0) || !std::isfinite(h)) throw InputError("grid spacing must be positive");
  if (!mu.empty()) {
    if (static_cast<int>(mu.size()) != size()) throw InputError("mu has wrong length");
    for (int v = 0; v < size(); ++v)
      if (!(mu[v] > 0) || !std::isfinite(mu[v]))
        throw InputError("mu must be positive at vertex " + std::to_string(v));
  }
}

nlohmann::json to_json(const ParamGrid &g) {
  nlohmann::json j = {{"nx", g.nx}, {"ny", g.ny}, {"h", g.h}, {"x0", g.x0}, {"y0", g.y0}};
  if (!g.mu.empty()) j["mu"] = g.mu;
  return j;
}

ParamGrid grid_from_json(const nlohmann::json &j) {
  ParamGrid g;
  try {
    g.nx = j.at("nx").get<int>();
    g.ny = j.at("ny").get<int>();
    g.h = j.at("h").get<double>();
    g.x0 = j.value("x0", 0.0);
    g.y0 = j.value("y0", 0.0);
    if (j.contains("mu")) g.mu = j.at("mu").get<std::vector<double>>();
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("grid json: ") + e.what());
  }
  g.validate();
  return g;
}

} // namespace spinorforge
