#include "gamow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gamow {

double perimeter(const Boundary& b) { return b.total_measure(); }

double volume(const Boundary& b) {
  const double v = b.signed_volume();
  if (!(v > 0.0)) throw GeometryError("nonpositive enclosed volume: orientation error");
  return v;
}

Vec3 centroid(const Boundary& b) {
  // Divergence theorem on x_k e_k: integral of x over E = (1/2) sum over boundary of x_k^2 nu_k.
  Vec3 moment = Vec3::Zero();
  for (std::size_t e = 0; e < b.element_count(); ++e) {
    const auto& el = b.element(e);
    const Vec3& nu = b.element_normal(e);
    const double m = b.element_measure(e);
    if (b.dimension() == 2) {
      const Vec3& p = b.vertex(el[0]);
      const Vec3& q = b.vertex(el[1]);
      // integral of x_k^2 along the segment = m (p^2 + p q + q^2) / 3
      const Vec3 sq = (p.cwiseProduct(p) + p.cwiseProduct(q) + q.cwiseProduct(q)) / 3.0;
      moment += 0.5 * m * sq.cwiseProduct(nu);
    } else {
      const Vec3& p = b.vertex(el[0]);
      const Vec3& q = b.vertex(el[1]);
      const Vec3& r = b.vertex(el[2]);
      // integral of x_k^2 over a triangle = A/6 (p^2 + q^2 + r^2 + pq + qr + rp)
      const Vec3 sq = (p.cwiseProduct(p) + q.cwiseProduct(q) + r.cwiseProduct(r) +
                       p.cwiseProduct(q) + q.cwiseProduct(r) + r.cwiseProduct(p)) /
                      6.0;
      moment += 0.5 * m * sq.cwiseProduct(nu);
    }
  }
  Vec3 c = moment / volume(b);
  if (b.dimension() == 2) c.z() = 0.0;
  return c;
}

double diameter(const Boundary& b) {
  const auto pts = b.vertices();
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(best);
}

double distance_to_vertices(const Boundary& b, const Vec3& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : b.vertices()) best = std::min(best, (p - x).squaredNorm());
  return std::sqrt(best);
}

namespace {
double directed_hausdorff(const Boundary& a, const Boundary& b) {
  double worst = 0.0;
  for (const auto& p : a.vertices()) worst = std::max(worst, distance_to_vertices(b, p));
  return worst;
}
}  // namespace

double hausdorff_distance(const Boundary& a, const Boundary& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double min_element_quality(const Boundary& b) {
  double worst = 1.0;
  if (b.dimension() == 2) {
    std::vector<double> len(b.vertex_count(), 0.0);
    std::vector<int> next(b.vertex_count(), -1);
    for (std::size_t e = 0; e < b.element_count(); ++e) next[b.element(e)[0]] = static_cast<int>(e);
    for (std::size_t e = 0; e < b.element_count(); ++e) {
      const int f = next[b.element(e)[1]];
      const double l0 = b.element_measure(e), l1 = b.element_measure(f);
      worst = std::min(worst, std::min(l0, l1) / std::max(l0, l1));
    }
    return worst;
  }
  for (std::size_t e = 0; e < b.element_count(); ++e) {
    const auto& el = b.element(e);
    const double s = (b.vertex(el[0]) - b.vertex(el[1])).squaredNorm() +
                     (b.vertex(el[1]) - b.vertex(el[2])).squaredNorm() +
                     (b.vertex(el[2]) - b.vertex(el[0])).squaredNorm();
    worst = std::min(worst, 4.0 * std::sqrt(3.0) * b.element_measure(e) / s);
  }
  return worst;
}

double volume_equivalent_radius(const Boundary& b) {
  const int n = b.dimension();
  return std::pow(volume(b) / unit_ball_volume(n), 1.0 / n);
}

double isoperimetric_bound(const Boundary& b) {
  const int n = b.dimension();
  return unit_sphere_area(n) * std::pow(volume_equivalent_radius(b), n - 1);
}

}  // namespace gamow
