#pragma once

#include <vector>

#include "gamow/boundary.hpp"

namespace gamow {

/// P(E, B_r(x)): boundary measure inside the ball, by exact clipping of each
/// flat element against B_r(x).
double local_perimeter(const Boundary& b, const Vec3& x, double r);

/// sigma(E, x, r) = |P(E, B_r(x)) - omega_{n-1} r^{n-1}| / r^{n-1}.
/// Requires r > 2 h (h = longest edge) and x within h of a vertex.
double excess(const Boundary& b, const Vec3& x, double r);

struct MonotonicityProfile {
  std::vector<double> radii;
  std::vector<double> values;  // P(E, B_s(x)) s^{1-n} e^{C0 s}
  bool nondecreasing = true;
  double worst_drop = 0.0;     // largest relative decrease between consecutive radii
  bool curvature_bound_holds = true;
  std::vector<int> violators;  // vertices with |H| > C0
};

struct MonotonicityOptions {
  double tolerance = 1e-2;  // allowed relative drop per step
  /// Throw InvalidInput listing the violators when |H| > C0 somewhere.
  bool enforce_bound = true;
};

MonotonicityProfile monotonicity_profile(const Boundary& b, const Vec3& x, double c0,
                                         const std::vector<double>& radii,
                                         const MonotonicityOptions& opts = {});

struct ToppingResult {
  double diameter = 0.0;
  double integral = 0.0;  // integral of H^{n-2}
  bool pass = false;      // diameter <= integral * 1.02
};

ToppingResult topping_check(const Boundary& b);

struct ComponentCensus {
  double area = 0.0;
  double willmore = 0.0;
  double deficit = 0.0;
  int euler_characteristic = 0;
};

struct ShapeCensus {
  int components = 0;
  std::vector<ComponentCensus> per_component;
  double willmore = 0.0;   // integral |B|^2
  double deficit = 0.0;    // integral (k1 - k2)^2, n = 3
  double half_mean_square = 0.0;  // integral H^2 / 2
  double asphericity = 0.0;
  Vec3 asphericity_center = Vec3::Zero();
  int euler_characteristic = 0;
};

/// min over y of integral |nu(x) - (x - y)/|x - y||^2, by Nelder-Mead from the
/// volume centroid. The optimal y is written to `center` when given.
double asphericity(const Boundary& b, Vec3* center = nullptr);

ShapeCensus shape_census(const Boundary& b);

struct ExcessProbe {
  int vertex = 0;
  double radius = 0.0;
  double value = 0.0;
};

struct DiagnosticsReport {
  int dimension = 3;
  double diameter = 0.0;
  ToppingResult topping;
  ShapeCensus census;
  std::vector<ExcessProbe> excess;
  bool monotonicity_pass = true;
};

struct DiagnosticsOptions {
  /// Probe vertices and radii for excess and monotonicity; empty selects
  /// three spread vertices at radius 0.5 of the volume-equivalent radius.
  std::vector<int> probe_vertices;
  double probe_radius = 0.0;
  std::vector<double> monotonicity_radii;
};

DiagnosticsReport diagnose(const Boundary& b, const DiagnosticsOptions& opts = {});

}  // namespace gamow
