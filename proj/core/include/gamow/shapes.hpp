#pragma once

#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "gamow/boundary.hpp"

namespace gamow {

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Union of pairwise disjoint (n = 2, 3) or tangent (n = 3 only) balls.
struct BallUnion {
  std::vector<Ball> balls;
};

/// B_R(center) minus the closed ball of radius `inner`.
struct Annulus {
  Vec3 center = Vec3::Zero();
  double outer = 1.0;
  double inner = 0.5;
};

/// Axis-aligned ellipsoid (ellipse for n = 2) with the given semi-axes.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  Vec3 semi_axes = Vec3(2.0, 1.0, 1.0);
};

/// Radial graph r(w) = radius * (1 + sum a_i Y_i(w)).
///
/// n = 3: keys (l, m) select the real Schmidt semi-normalized spherical
/// harmonic (Y_l0 = P_l(cos theta), |m| > 0 cosine for m > 0, sine for m < 0).
/// n = 2: key (k, 0) is cos(k theta), (k, 1) is sin(k theta).
struct PerturbedBall {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
  std::map<std::pair<int, int>, double> amplitudes;
};

using ShapeVariant = std::variant<Ball, BallUnion, Annulus, Ellipsoid, PerturbedBall>;

struct ShapeSpec {
  int dimension = 3;
  ShapeVariant shape = Ball{};
  /// n = 3: icosphere subdivision level (level 4 = 2562 vertices per sphere).
  /// n = 2: vertex count per closed curve.
  int resolution = 3;
};

/// Builds a Boundary for an analytic shape. Validates the spec (radii,
/// ordering, disjointness, positivity of the radial graph).
Boundary tessellate(const ShapeSpec& spec);

/// Unit-sphere icosphere: 10 * 4^level + 2 vertices, outward orientation.
Boundary icosphere(int level);

/// Real Schmidt semi-normalized spherical harmonic evaluated at direction d (|d| > 0).
double real_spherical_harmonic(int l, int m, const Vec3& d);

/// Radial factor 1 + sum a Y(w) of a PerturbedBall at direction d.
double radial_factor(const PerturbedBall& shape, int dimension, const Vec3& d);

/// Closed-form enclosed volume of an analytic spec; throws Unsupported for
/// perturbed balls.
double analytic_volume(const ShapeSpec& spec);

}  // namespace gamow
