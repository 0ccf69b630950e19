#include "gamow/shapes.hpp"

#include <cmath>
#include <map>
#include <string>

namespace gamow {

namespace {

struct RawMesh {
  std::vector<Vec3> points;
  std::vector<std::array<int, 3>> triangles;
};

RawMesh raw_icosphere(int level) {
  if (level < 0 || level > 8) throw InvalidInput("icosphere level must be in [0, 8]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.points = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
              {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : m.points) p.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      m.points.push_back((m.points[a] + m.points[b]).normalized());
      const int id = static_cast<int>(m.points.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& f : m.triangles) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  return m;
}

void append(RawMesh& into, const RawMesh& part) {
  const int offset = static_cast<int>(into.points.size());
  into.points.insert(into.points.end(), part.points.begin(), part.points.end());
  for (auto f : part.triangles) {
    for (auto& v : f) v += offset;
    into.triangles.push_back(f);
  }
}

void reverse(RawMesh& m) {
  for (auto& f : m.triangles) std::swap(f[1], f[2]);
}

struct RawCurve {
  std::vector<Vec3> points;
  std::vector<std::array<int, 2>> segments;
};

template <class Radial>
void append_loop(RawCurve& into, int count, bool clockwise, Radial&& point_at) {
  if (count < 3) throw InvalidInput("curve resolution must be at least 3 vertices");
  const int offset = static_cast<int>(into.points.size());
  for (int k = 0; k < count; ++k) {
    const double theta = 2.0 * pi * k / count;
    into.points.push_back(point_at(theta));
  }
  for (int k = 0; k < count; ++k) {
    const int a = offset + k, b = offset + (k + 1) % count;
    if (clockwise) into.segments.push_back({b, a});
    else into.segments.push_back({a, b});
  }
}

double associated_legendre(int l, int m, double x) {
  // Unnormalized, no Condon-Shortley phase.
  double pmm = 1.0;
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * s;
  if (l == m) return pmm;
  double pmm1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmm1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * x * pmm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmm1;
    pmm1 = pll;
  }
  return pll;
}

void check_radius(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw InvalidInput(std::string(what) + " must be positive and finite");
}

void check_balls(const BallUnion& u, int dim) {
  if (u.balls.empty()) throw InvalidInput("ball union is empty");
  for (const auto& b : u.balls) check_radius(b.radius, "ball radius");
  for (std::size_t i = 0; i < u.balls.size(); ++i)
    for (std::size_t j = i + 1; j < u.balls.size(); ++j) {
      Vec3 d = u.balls[i].center - u.balls[j].center;
      if (dim == 2) d.z() = 0.0;
      const double gap = d.norm() - u.balls[i].radius - u.balls[j].radius;
      const double scale = u.balls[i].radius + u.balls[j].radius;
      if (gap < -1e-12 * scale)
        throw InvalidInput("balls " + std::to_string(i) + " and " + std::to_string(j) +
                           " overlap");
      if (dim == 2 && gap <= 1e-12 * scale)
        throw Unsupported("tangent balls are not supported for n = 2 polygonal boundaries");
    }
}

}  // namespace

double real_spherical_harmonic(int l, int m, const Vec3& d) {
  if (l < 0 || std::abs(m) > l) throw InvalidInput("spherical harmonic index out of range");
  const double r = d.norm();
  if (!(r > 0.0)) throw InvalidInput("spherical harmonic direction must be nonzero");
  const double ct = std::clamp(d.z() / r, -1.0, 1.0);
  const double phi = std::atan2(d.y(), d.x());
  const int am = std::abs(m);
  double norm = 1.0;
  if (am > 0) {
    // sqrt(2 (l - m)! / (l + m)!)
    double ratio = 1.0;
    for (int i = l - am + 1; i <= l + am; ++i) ratio /= i;
    norm = std::sqrt(2.0 * ratio);
  }
  const double p = norm * associated_legendre(l, am, ct);
  if (m > 0) return p * std::cos(am * phi);
  if (m < 0) return p * std::sin(am * phi);
  return p;
}

double radial_factor(const PerturbedBall& shape, int dimension, const Vec3& d) {
  double f = 1.0;
  if (dimension == 2) {
    const double theta = std::atan2(d.y(), d.x());
    for (const auto& [key, a] : shape.amplitudes) {
      const auto [k, slot] = key;
      if (k < 0 || (slot != 0 && slot != 1))
        throw InvalidInput("Fourier perturbation index must be (k >= 0, 0|1)");
      f += a * (slot == 0 ? std::cos(k * theta) : std::sin(k * theta));
    }
  } else {
    for (const auto& [key, a] : shape.amplitudes)
      f += a * real_spherical_harmonic(key.first, key.second, d);
  }
  return f;
}

Boundary icosphere(int level) {
  auto m = raw_icosphere(level);
  return Boundary::surface(std::move(m.points), std::move(m.triangles));
}

Boundary tessellate(const ShapeSpec& spec) {
  const int dim = spec.dimension;
  if (dim != 2 && dim != 3) throw Unsupported("only dimensions 2 and 3 are discretized");

  if (dim == 2) {
    RawCurve c;
    const int count = spec.resolution;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            check_radius(s.radius, "ball radius");
            append_loop(c, count, false, [&](double t) {
              return Vec3(s.center.x() + s.radius * std::cos(t),
                          s.center.y() + s.radius * std::sin(t), 0.0);
            });
          } else if constexpr (std::is_same_v<T, BallUnion>) {
            check_balls(s, 2);
            for (const auto& b : s.balls)
              append_loop(c, count, false, [&](double t) {
                return Vec3(b.center.x() + b.radius * std::cos(t),
                            b.center.y() + b.radius * std::sin(t), 0.0);
              });
          } else if constexpr (std::is_same_v<T, Annulus>) {
            check_radius(s.outer, "annulus outer radius");
            check_radius(s.inner, "annulus inner radius");
            if (!(s.inner < s.outer)) throw InvalidInput("annulus requires inner < outer");
            for (const auto& [r, cw] : {std::pair{s.outer, false}, std::pair{s.inner, true}})
              append_loop(c, count, cw, [&](double t) {
                return Vec3(s.center.x() + r * std::cos(t), s.center.y() + r * std::sin(t), 0.0);
              });
          } else if constexpr (std::is_same_v<T, Ellipsoid>) {
            check_radius(s.semi_axes.x(), "semi-axis");
            check_radius(s.semi_axes.y(), "semi-axis");
            append_loop(c, count, false, [&](double t) {
              return Vec3(s.center.x() + s.semi_axes.x() * std::cos(t),
                          s.center.y() + s.semi_axes.y() * std::sin(t), 0.0);
            });
          } else {
            check_radius(s.radius, "perturbed ball radius");
            append_loop(c, count, false, [&](double t) {
              const Vec3 d(std::cos(t), std::sin(t), 0.0);
              const double f = radial_factor(s, 2, d);
              if (!(f > 0.0))
                throw InvalidInput("perturbation amplitude too large: radial graph is nonpositive");
              return Vec3(s.center.x() + s.radius * f * d.x(),
                          s.center.y() + s.radius * f * d.y(), 0.0);
            });
          }
        },
        spec.shape);
    return Boundary::curve(std::move(c.points), std::move(c.segments));
  }

  RawMesh out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          check_radius(s.radius, "ball radius");
          out = raw_icosphere(spec.resolution);
          for (auto& p : out.points) p = s.center + s.radius * p;
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          check_balls(s, 3);
          for (const auto& b : s.balls) {
            auto part = raw_icosphere(spec.resolution);
            for (auto& p : part.points) p = b.center + b.radius * p;
            append(out, part);
          }
        } else if constexpr (std::is_same_v<T, Annulus>) {
          check_radius(s.outer, "annulus outer radius");
          check_radius(s.inner, "annulus inner radius");
          if (!(s.inner < s.outer)) throw InvalidInput("annulus requires inner < outer");
          out = raw_icosphere(spec.resolution);
          for (auto& p : out.points) p = s.center + s.outer * p;
          auto hole = raw_icosphere(spec.resolution);
          for (auto& p : hole.points) p = s.center + s.inner * p;
          reverse(hole);
          append(out, hole);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          for (int a = 0; a < 3; ++a) check_radius(s.semi_axes[a], "semi-axis");
          out = raw_icosphere(spec.resolution);
          for (auto& p : out.points) p = s.center + s.semi_axes.cwiseProduct(p);
        } else {
          check_radius(s.radius, "perturbed ball radius");
          out = raw_icosphere(spec.resolution);
          for (auto& p : out.points) {
            const double f = radial_factor(s, 3, p);
            if (!(f > 0.0))
              throw InvalidInput("perturbation amplitude too large: radial graph is nonpositive");
            p = s.center + s.radius * f * p;
          }
        }
      },
      spec.shape);
  return Boundary::surface(std::move(out.points), std::move(out.triangles));
}

double analytic_volume(const ShapeSpec& spec) {
  const int n = spec.dimension;
  const double w = unit_ball_volume(n);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return w * std::pow(s.radius, n);
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          double v = 0.0;
          for (const auto& b : s.balls) v += w * std::pow(b.radius, n);
          return v;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          return w * (std::pow(s.outer, n) - std::pow(s.inner, n));
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return n == 2 ? w * s.semi_axes.x() * s.semi_axes.y() : w * s.semi_axes.prod();
        } else {
          throw Unsupported("no closed-form volume for perturbed balls");
        }
      },
      spec.shape);
}

}  // namespace gamow
