#include "gamow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "gamow/measures.hpp"

namespace gamow {

namespace {

using Vec2 = Eigen::Vector2d;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Parameters t in (0, 1) where a + t (b - a) crosses the circle |p| = R.
std::vector<double> circle_crossings(const Vec2& a, const Vec2& b, double R) {
  const Vec2 d = b - a;
  const double A = d.squaredNorm(), B = 2.0 * a.dot(d), C = a.squaredNorm() - R * R;
  std::vector<double> ts;
  const double disc = B * B - 4.0 * A * C;
  if (A == 0.0 || disc <= 0.0) return ts;
  const double s = std::sqrt(disc);
  for (double t : {(-B - s) / (2.0 * A), (-B + s) / (2.0 * A)})
    if (t > 0.0 && t < 1.0) ts.push_back(t);
  return ts;
}

// Signed area of (disk of radius R at the origin) intersected with triangle (0, a, b).
double wedge_area(const Vec2& a, const Vec2& b, double R) {
  std::vector<Vec2> pts{a};
  for (double t : circle_crossings(a, b, R)) pts.push_back(a + t * (b - a));
  pts.push_back(b);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 &p = pts[i], &q = pts[i + 1];
    if ((0.5 * (p + q)).norm() <= R) area += 0.5 * cross2(p, q);
    else area += 0.5 * R * R * std::atan2(cross2(p, q), p.dot(q));
  }
  return area;
}

double clipped_triangle_area(const Vec3& x, double r, const std::array<Vec3, 3>& t,
                             const Vec3& normal) {
  const double d = (x - t[0]).dot(normal);
  if (std::abs(d) >= r) return 0.0;
  const double rr = std::sqrt(r * r - d * d);
  const Vec3 c = x - d * normal;
  // In-plane frame.
  const Vec3 e1 = (t[1] - t[0]).normalized();
  const Vec3 e2 = normal.cross(e1);
  std::array<Vec2, 3> p;
  for (int i = 0; i < 3; ++i) p[i] = Vec2((t[i] - c).dot(e1), (t[i] - c).dot(e2));
  double area = 0.0;
  for (int i = 0; i < 3; ++i) area += wedge_area(p[i], p[(i + 1) % 3], rr);
  return std::abs(area);
}

double clipped_segment_length(const Vec3& x, double r, const Vec3& a, const Vec3& b) {
  const Vec2 p(a.x() - x.x(), a.y() - x.y()), q(b.x() - x.x(), b.y() - x.y());
  std::vector<double> ts{0.0};
  for (double t : circle_crossings(p, q, r)) ts.push_back(t);
  ts.push_back(1.0);
  double len = 0.0;
  const double full = (q - p).norm();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double tm = 0.5 * (ts[i] + ts[i + 1]);
    if ((p + tm * (q - p)).norm() <= r) len += (ts[i + 1] - ts[i]) * full;
  }
  return len;
}

void check_radius(const Boundary& b, double r) {
  const double h = b.max_edge_length();
  if (!(r > 2.0 * h))
    throw InvalidInput("radius " + std::to_string(r) + " is below twice the mesh size " +
                       std::to_string(h));
}

// Nelder-Mead on R^d (d = 2 or 3) with fixed initialization.
Vec3 nelder_mead(const std::function<double(const Vec3&)>& f, const Vec3& x0, int dim,
                 double step, double tol, int max_iter) {
  std::vector<Vec3> s(dim + 1, x0);
  for (int i = 0; i < dim; ++i) s[i + 1][i] += step;
  std::vector<double> fs(dim + 1);
  for (int i = 0; i <= dim; ++i) fs[i] = f(s[i]);
  std::vector<int> order(dim + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order.front(), worst = order.back(), second = order[dim - 1];
    double size = 0.0;
    for (int i = 0; i <= dim; ++i) size = std::max(size, (s[i] - s[best]).norm());
    if (size < tol && std::abs(fs[worst] - fs[best]) <= tol * (1.0 + std::abs(fs[best]))) break;

    Vec3 c = Vec3::Zero();
    for (int i = 0; i <= dim; ++i)
      if (i != worst) c += s[i];
    c /= dim;
    const Vec3 xr = c + (c - s[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Vec3 xe = c + 2.0 * (c - s[worst]);
      const double fe = f(xe);
      if (fe < fr) s[worst] = xe, fs[worst] = fe;
      else s[worst] = xr, fs[worst] = fr;
    } else if (fr < fs[second]) {
      s[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      const Vec3 xc = outside ? Vec3(c + 0.5 * (xr - c)) : Vec3(c + 0.5 * (s[worst] - c));
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        s[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == best) continue;
          s[i] = s[best] + 0.5 * (s[i] - s[best]);
          fs[i] = f(s[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= dim; ++i)
    if (fs[i] < fs[best]) best = i;
  return s[best];
}

}  // namespace

double local_perimeter(const Boundary& b, const Vec3& x, double r) {
  if (!(r > 0.0)) throw InvalidInput("radius must be positive");
  double total = 0.0;
  for (std::size_t e = 0; e < b.element_count(); ++e) {
    const auto& el = b.element(e);
    // Cheap rejection by bounding sphere.
    const Vec3 c = b.element_centroid(e);
    if ((c - x).norm() > r + b.element_diameter(e)) continue;
    if (b.dimension() == 2) {
      total += clipped_segment_length(x, r, b.vertex(el[0]), b.vertex(el[1]));
    } else {
      total += clipped_triangle_area(x, r, {b.vertex(el[0]), b.vertex(el[1]), b.vertex(el[2])},
                                     b.element_normal(e));
    }
  }
  return total;
}

double excess(const Boundary& b, const Vec3& x, double r) {
  check_radius(b, r);
  if (distance_to_vertices(b, x) > b.max_edge_length())
    throw InvalidInput("excess probe point is not on the boundary");
  const int n = b.dimension();
  const double flat = unit_ball_volume(n - 1) * std::pow(r, n - 1);
  return std::abs(local_perimeter(b, x, r) - flat) / std::pow(r, n - 1);
}

MonotonicityProfile monotonicity_profile(const Boundary& b, const Vec3& x, double c0,
                                         const std::vector<double>& radii,
                                         const MonotonicityOptions& opts) {
  MonotonicityProfile out;
  const VectorX& H = b.curvature().mean;
  for (Eigen::Index i = 0; i < H.size(); ++i)
    if (std::abs(H[i]) > c0) out.violators.push_back(static_cast<int>(i));
  out.curvature_bound_holds = out.violators.empty();
  if (!out.curvature_bound_holds && opts.enforce_bound) {
    std::string ids;
    for (std::size_t i = 0; i < out.violators.size() && i < 10; ++i)
      ids += (i ? ", " : "") + std::to_string(out.violators[i]);
    if (out.violators.size() > 10) ids += ", ...";
    throw InvalidInput("C0 too small: |H| > C0 at " + std::to_string(out.violators.size()) +
                       " vertices (" + ids + ")");
  }
  const int n = b.dimension();
  out.radii = radii;
  std::sort(out.radii.begin(), out.radii.end());
  for (double s : out.radii) {
    check_radius(b, s);
    out.values.push_back(local_perimeter(b, x, s) * std::pow(s, 1 - n) * std::exp(c0 * s));
  }
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    const double drop = (out.values[i - 1] - out.values[i]) / out.values[i - 1];
    out.worst_drop = std::max(out.worst_drop, drop);
    if (drop > opts.tolerance) out.nondecreasing = false;
  }
  return out;
}

ToppingResult topping_check(const Boundary& b) {
  ToppingResult r;
  r.diameter = diameter(b);
  const VectorX& H = b.curvature().mean;
  const VectorX& A = b.vertex_areas();
  const int n = b.dimension();
  for (Eigen::Index i = 0; i < H.size(); ++i) r.integral += A[i] * std::pow(H[i], n - 2);
  r.pass = r.diameter <= r.integral * 1.02;
  return r;
}

double asphericity(const Boundary& b, Vec3* center) {
  const auto normals = b.normals();
  const VectorX& A = b.vertex_areas();
  auto f = [&](const Vec3& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.vertex_count(); ++i) {
      const Vec3 d = b.vertex(i) - y;
      const double dn = d.norm();
      if (dn == 0.0) return std::numeric_limits<double>::infinity();
      s += A[i] * (normals[i] - d / dn).squaredNorm();
    }
    return s;
  };
  const Vec3 y0 = centroid(b);
  const double step = 0.1 * volume_equivalent_radius(b);
  const Vec3 y = nelder_mead(f, y0, b.dimension(), step, 1e-8 * step, 2000);
  if (center) *center = y;
  return f(y);
}

ShapeCensus shape_census(const Boundary& b) {
  ShapeCensus c;
  c.components = b.component_count();
  c.per_component.resize(c.components);
  const auto comp = b.vertex_components();
  const auto& cf = b.curvature();
  const VectorX& A = b.vertex_areas();
  const int n = b.dimension();
  for (std::size_t i = 0; i < b.vertex_count(); ++i) {
    auto& pc = c.per_component[comp[i]];
    pc.area += A[i];
    pc.willmore += A[i] * cf.second_form[i];
    if (n == 3) {
      const double d = cf.kappa1[i] - cf.kappa2[i];
      pc.deficit += A[i] * d * d;
    }
    c.half_mean_square += 0.5 * A[i] * cf.mean[i] * cf.mean[i];
    pc.euler_characteristic += 1;
  }
  if (n == 3) {
    for (const auto& e : b.edges()) c.per_component[comp[e[0]]].euler_characteristic -= 1;
    const auto ecomp = b.element_components();
    for (std::size_t e = 0; e < b.element_count(); ++e)
      c.per_component[ecomp[e]].euler_characteristic += 1;
  } else {
    for (auto& pc : c.per_component) pc.euler_characteristic = 0;
  }
  for (const auto& pc : c.per_component) {
    c.willmore += pc.willmore;
    c.deficit += pc.deficit;
    c.euler_characteristic += pc.euler_characteristic;
  }
  c.asphericity = asphericity(b, &c.asphericity_center);
  return c;
}

DiagnosticsReport diagnose(const Boundary& b, const DiagnosticsOptions& opts) {
  DiagnosticsReport r;
  r.dimension = b.dimension();
  r.topping = topping_check(b);
  r.diameter = r.topping.diameter;
  r.census = shape_census(b);

  std::vector<int> probes = opts.probe_vertices;
  if (probes.empty()) {
    const int nv = static_cast<int>(b.vertex_count());
    probes = {0, nv / 3, (2 * nv) / 3};
  }
  const double h = b.max_edge_length();
  double radius = opts.probe_radius > 0.0 ? opts.probe_radius : 0.5 * volume_equivalent_radius(b);
  radius = std::max(radius, 2.5 * h);
  std::vector<double> radii = opts.monotonicity_radii;
  if (radii.empty())
    for (double f : {1.0, 1.5, 2.0, 3.0}) radii.push_back(f * radius);

  double c0 = b.curvature().mean.cwiseAbs().maxCoeff();
  for (int v : probes) {
    if (v < 0 || v >= static_cast<int>(b.vertex_count()))
      throw InvalidInput("probe vertex out of range");
    r.excess.push_back({v, radius, excess(b, b.vertex(v), radius)});
    const auto prof = monotonicity_profile(b, b.vertex(v), c0, radii);
    r.monotonicity_pass = r.monotonicity_pass && prof.nondecreasing;
  }
  return r;
}

}  // namespace gamow
