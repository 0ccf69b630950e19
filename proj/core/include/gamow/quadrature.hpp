#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "gamow/common.hpp"

namespace gamow::quad {

/// Gauss-Legendre rule on [0, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with `points` nodes (1..64).
const Rule1D& gauss_legendre(int points);

/// Rule on the reference triangle {(s, t): s, t >= 0, s + t <= 1}; weights sum to 1
/// so a physical integral is area * sum w f. Points are barycentric (1 - s - t, s, t).
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
};

/// Symmetric rules exact to the given polynomial degree (1, 2, 5), or a
/// collapsed Gauss product rule with points^2 nodes when degree < 0.
const TriangleRule& triangle_rule(int degree);
const TriangleRule& collapsed_gauss_rule(int points);

/// Closest point of triangle (a, b, c) to x, as barycentric coordinates.
std::array<double, 3> closest_point_barycentric(const Vec3& x, const Vec3& a, const Vec3& b,
                                                const Vec3& c);

/// Options for the singular/near-singular triangle integrator.
struct DuffyOptions {
  int radial_points = 5;   // Gauss points per radial interval
  int angular_points = 6;  // Gauss points along the opposite edge
  /// Radial grading breakpoints in (0, 1); the integrand is near-singular at s = 0.
  std::array<double, 2> grading = {1.0 / 16.0, 1.0 / 4.0};
};

/// Hat-weighted moments  m_a = integral over T of kernel(|x - y|) phi_a(y) dsigma(y),
/// a = 0..2, computed by splitting T about the point of T closest to x and
/// mapping each piece with a Duffy (collapsed-square) transform whose Jacobian
/// cancels a 1/|x - y| singularity. Accurate for x anywhere, including on T.
template <class Kernel>
std::array<double, 3> duffy_moments(const Vec3& x, const std::array<Vec3, 3>& tri, Kernel&& kernel,
                                    const DuffyOptions& opts = {}) {
  const auto beta = closest_point_barycentric(x, tri[0], tri[1], tri[2]);
  const Vec3 p = beta[0] * tri[0] + beta[1] * tri[1] + beta[2] * tri[2];
  const double area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
  const auto& rs = gauss_legendre(opts.radial_points);
  const auto& rt = gauss_legendre(opts.angular_points);
  const double cuts[4] = {0.0, opts.grading[0], opts.grading[1], 1.0};

  std::array<double, 3> m{0.0, 0.0, 0.0};
  for (int edge = 0; edge < 3; ++edge) {
    const int ia = edge, ib = (edge + 1) % 3;
    const Vec3 da = tri[ia] - p;
    const Vec3 dab = tri[ib] - tri[ia];
    const double sub = 0.5 * da.cross(dab).norm();
    if (!(sub > 1e-14 * area)) continue;
    // y(s, t) = p + s (da + t dab), dy = 2 sub * s ds dt. Along the edge,
    // tau = d sinh(u) from the foot of the perpendicular flattens 1/|y - p|.
    std::array<double, 3> ea{0.0, 0.0, 0.0}, eb{0.0, 0.0, 0.0};
    ea[ia] = 1.0;
    eb[ib] = 1.0;
    const double len = dab.norm();
    const double d = 2.0 * sub / len;
    const double tau_a = da.dot(dab) / len;
    const double u0 = std::asinh(tau_a / d), u1 = std::asinh((tau_a + len) / d);
    std::vector<double> tn(rt.nodes.size()), tw(rt.nodes.size());
    for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
      const double u = u0 + (u1 - u0) * rt.nodes[j];
      tn[j] = (d * std::sinh(u) - tau_a) / len;
      tw[j] = rt.weights[j] * (u1 - u0) * d * std::cosh(u) / len;
    }
    for (int seg = 0; seg < 3; ++seg) {
      const double s0 = cuts[seg], s1 = cuts[seg + 1], hs = s1 - s0;
      for (std::size_t i = 0; i < rs.nodes.size(); ++i) {
        const double s = s0 + hs * rs.nodes[i];
        const double ws = hs * rs.weights[i] * s * 2.0 * sub;
        for (std::size_t j = 0; j < tn.size(); ++j) {
          const double t = tn[j];
          const Vec3 y = p + s * (da + t * dab);
          const double k = kernel((x - y).norm()) * ws * tw[j];
          for (int a = 0; a < 3; ++a) {
            const double phi = beta[a] + s * ((ea[a] - beta[a]) + t * (eb[a] - ea[a]));
            m[a] += k * phi;
          }
        }
      }
    }
  }
  return m;
}

/// Exact integrals of log|x - y| over the segment [p, q] against its two hat
/// functions (phi_p, phi_q). Valid for any x, including on the segment.
std::array<double, 2> segment_log_moments(const Vec3& x, const Vec3& p, const Vec3& q);

}  // namespace gamow::quad
