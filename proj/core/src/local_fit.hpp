#pragma once

#include <vector>

#include "gamow/boundary.hpp"

namespace gamow::detail {

// Height field z = a u^2 + b uv + c v^2 + d u + e v over the tangent plane of
// a vertex, least-squares fitted to its two-ring.
struct LocalFit {
  Vec3 origin, n, t1, t2;
  double c[5] = {0, 0, 0, 0, 0};

  Vec3 normal_at(double u, double v) const {
    const double hu = 2.0 * c[0] * u + c[1] * v + c[3];
    const double hv = c[1] * u + 2.0 * c[2] * v + c[4];
    return (n - hu * t1 - hv * t2).normalized();
  }
  Vec3 normal() const { return normal_at(0.0, 0.0); }
  // Vertical projection onto the fitted patch.
  Vec3 project(const Vec3& p, Vec3* normal_out = nullptr) const {
    const Vec3 d = p - origin;
    const double u = d.dot(t1), v = d.dot(t2);
    const double h = c[0] * u * u + c[1] * u * v + c[2] * v * v + c[3] * u + c[4] * v;
    if (normal_out) *normal_out = normal_at(u, v);
    return origin + u * t1 + v * t2 + h * n;
  }
};

std::vector<LocalFit> local_fits(const Boundary& b);

}  // namespace gamow::detail
