#pragma once
#include <json.hpp>
#include <type_traits>
#include <vector>

namespace spinorforge {

// Rectangular conformal parameter grid. Vertex (i, j) sits at (x0 + i h, y0 + j h);
// flat index j * nx + i. The induced metric is mu^2 (dx^2 + dy^2).
struct ParamGrid {
  int nx = 0, ny = 0;
  double h = 0;
  double x0 = 0, y0 = 0;
  std::vector<double> mu; // empty: mu == 1

  ParamGrid() = default;
  ParamGrid(int nx, int ny, double h, double x0 = 0, double y0 = 0);

  void validate() const;
  int size() const { return nx * ny; }
  int idx(int i, int j) const { return j * nx + i; }
  double x(int i) const { return x0 + i * h; }
  double y(int j) const { return y0 + j * h; }
  double conformal(int v) const { return mu.empty() ? 1.0 : mu[v]; }
  bool interior(int i, int j) const { return i > 0 && j > 0 && i + 1 < nx && j + 1 < ny; }
};

nlohmann::json to_json(const ParamGrid &g);
ParamGrid grid_from_json(const nlohmann::json &j);

// Second-order finite differences: central inside, one-sided at the boundary.
// `get(i, j)` returns any value type with +, - and scalar *.
template <class Get>
auto diff(const ParamGrid &g, Get get, int dir, int i, int j) -> std::decay_t<decltype(get(i, j))> {
  const int n = dir == 0 ? g.nx : g.ny;
  const int k = dir == 0 ? i : j;
  auto at = [&](int s) { return dir == 0 ? get(i + s, j) : get(i, j + s); };
  const double inv = 1.0 / (2.0 * g.h);
  if (n == 2) return (at(1 - k) - at(-k)) * (2.0 * inv);
  if (k == 0) return (at(0) * -3.0 + at(1) * 4.0 - at(2)) * inv;
  if (k == n - 1) return (at(0) * 3.0 - at(-1) * 4.0 + at(-2)) * inv;
  return (at(1) - at(-1)) * inv;
}

// Fourth-order first derivative: five-point central stencil, six-point closures on the two rows
// nearest each boundary; falls back to `diff` below six nodes.
template <class Get>
auto diff4(const ParamGrid &g, Get get, int dir, int i, int j) -> std::decay_t<decltype(get(i, j))> {
  const int n = dir == 0 ? g.nx : g.ny;
  if (n < 6) return diff(g, get, dir, i, j);
  const int k = dir == 0 ? i : j;
  auto at = [&](int s) { return dir == 0 ? get(i + s, j) : get(i, j + s); };
  if (k <= 1 || k >= n - 2) {
    const double inv = 1.0 / (60.0 * g.h);
    if (k == 0)
      return (at(0) * -137.0 + at(1) * 300.0 - at(2) * 300.0 + at(3) * 200.0 - at(4) * 75.0 + at(5) * 12.0) * inv;
    if (k == 1)
      return (at(-1) * -12.0 - at(0) * 65.0 + at(1) * 120.0 - at(2) * 60.0 + at(3) * 20.0 - at(4) * 3.0) * inv;
    if (k == n - 1)
      return (at(0) * 137.0 - at(-1) * 300.0 + at(-2) * 300.0 - at(-3) * 200.0 + at(-4) * 75.0 - at(-5) * 12.0) * inv;
    return (at(1) * 12.0 + at(0) * 65.0 - at(-1) * 120.0 + at(-2) * 60.0 - at(-3) * 20.0 + at(-4) * 3.0) * inv;
  }
  return (at(-2) - at(-1) * 8.0 + at(1) * 8.0 - at(2)) * (1.0 / (12.0 * g.h));
}

template <class Get>
auto diff2(const ParamGrid &g, Get get, int dir, int i, int j) -> std::decay_t<decltype(get(i, j))> {
  const int n = dir == 0 ? g.nx : g.ny;
  const int k = dir == 0 ? i : j;
  auto at = [&](int s) { return dir == 0 ? get(i + s, j) : get(i, j + s); };
  const double inv = 1.0 / (g.h * g.h);
  if (n < 4) {
    int c = k == 0 ? 1 : (k == n - 1 ? -1 : 0);
    return (at(c + 1) - at(c) * 2.0 + at(c - 1)) * inv;
  }
  if (k == 0) return (at(0) * 2.0 - at(1) * 5.0 + at(2) * 4.0 - at(3)) * inv;
  if (k == n - 1) return (at(0) * 2.0 - at(-1) * 5.0 + at(-2) * 4.0 - at(-3)) * inv;
  return (at(1) - at(0) * 2.0 + at(-1)) * inv;
}

// Second derivative with six-point fourth-order closures at the boundary rows, for smooth sampled data.
template <class Get>
auto diff2_wide(const ParamGrid &g, Get get, int dir, int i, int j) -> std::decay_t<decltype(get(i, j))> {
  const int n = dir == 0 ? g.nx : g.ny;
  const int k = dir == 0 ? i : j;
  if (n < 6 || (k > 0 && k < n - 1)) return diff2(g, get, dir, i, j);
  const int s = k == 0 ? 1 : -1;
  auto at = [&](int t) { return dir == 0 ? get(i + s * t, j) : get(i, j + s * t); };
  return (at(0) * 45.0 - at(1) * 154.0 + at(2) * 214.0 - at(3) * 156.0 + at(4) * 61.0 - at(5) * 10.0) *
         (1.0 / (12.0 * g.h * g.h));
}

} // namespace spinorforge
