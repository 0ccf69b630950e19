#pragma once

#include <gamow/shapes.hpp>

namespace fixture {

inline gamow::Boundary sphere(int level = 3, double radius = 1.0,
                              const gamow::Vec3& center = gamow::Vec3::Zero()) {
  return gamow::tessellate({3, gamow::Ball{center, radius}, level});
}

inline gamow::Boundary circle(int points = 256, double radius = 1.0) {
  return gamow::tessellate({2, gamow::Ball{gamow::Vec3::Zero(), radius}, points});
}

inline gamow::Boundary ellipsoid(const gamow::Vec3& axes, int level = 3) {
  return gamow::tessellate({3, gamow::Ellipsoid{gamow::Vec3::Zero(), axes}, level});
}

inline gamow::Boundary two_spheres(double r0, double r1, double gap, int level = 3) {
  gamow::BallUnion u;
  u.balls.push_back({gamow::Vec3::Zero(), r0});
  u.balls.push_back({gamow::Vec3(r0 + r1 + gap, 0.0, 0.0), r1});
  return gamow::tessellate({3, u, level});
}

inline gamow::Boundary annulus(double outer, double inner, int level = 3) {
  return gamow::tessellate({3, gamow::Annulus{gamow::Vec3::Zero(), outer, inner}, level});
}

inline Eigen::Matrix3d rotation() {
  return Eigen::AngleAxisd(0.7, gamow::Vec3(1.0, 2.0, -0.5).normalized()).toRotationMatrix();
}

}  // namespace fixture
