#pragma once
#include "spinorforge/immersion_data.hpp"
#include "spinorforge/lie_algebra.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace spinorforge {

// Analytic surface data sampled on an (N+1) x (N+1) grid with h = 1/N.
struct Fixture {
  std::string name;
  MetricLieAlgebra alg;
  ImmersionData data;
};

// Round sphere of radius r in R^3, chart [-1/2, 1/2]^2 by inverse stereographic projection,
// inward normal, S = Id / r. `codazzi_break` adds eps * y to S_11.
Fixture sphere_fixture(int N, double r = 1.0, double codazzi_break = 0.0);
Eigen::Vector3d sphere_point(double x, double y, double r = 1.0);
// The same sphere inside R^3 in R^4 with the normal frame rotated by 0.3 x y.
Fixture sphere_codim2_fixture(int N, double r = 1.0);
Fixture plane_fixture(int N);
// Totally geodesic slice x2 = 0 of H^2 x R, chart [0,1] x [1,2] with mu = 1/y.
Fixture h2xr_slice_fixture(int N);
// Vertical cylinder over a circle of radius rho in the Heisenberg group E(0, tau),
// chart [0, 1]^2 through u + iv = exp(x + iy).
Fixture heisenberg_cylinder_fixture(int N, double tau = 0.5, double rho = 1.0);
// Great sphere {w + y j + z k} of S^3 with constant normal i, chart [-1/2, 1/2]^2.
Fixture s3_equator_fixture(int N);
// Vertical plane x2 = 0 of Sol3, chart [0,1] x [1,2] with mu = 1/y.
Fixture sol3_cylinder_fixture(int N);
// Horosphere a_3 = 1 of H^3 with l = lambda e3, S = lambda Id.
Fixture horosphere_fixture(int N, double lambda = 1.0);

std::vector<std::string> fixture_names();
Fixture make_fixture(const std::string &name, int N);

} // namespace spinorforge
