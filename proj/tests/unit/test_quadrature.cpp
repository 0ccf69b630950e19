#include <doctest.h>

#include <cmath>

#include <gamow/quadrature.hpp>

using namespace gamow;
using namespace gamow::quad;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Average of s^a t^b over the reference triangle.
double monomial_mean(int a, int b) { return 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2); }

double apply(const TriangleRule& r, int a, int b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < r.weights.size(); ++i)
    sum += r.weights[i] * std::pow(r.bary[i][1], a) * std::pow(r.bary[i][2], b);
  return sum;
}

// int_T dy / |x - y| for x in the plane of T: sum over edges of
// d [asinh(t / d)] between the edge endpoints, d the distance to the edge line.
double planar_inverse_distance(const Vec3& x, const std::array<Vec3, 3>& tri) {
  const Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
  double sum = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vec3 a = tri[e], b = tri[(e + 1) % 3];
    const Vec3 t = (b - a).normalized();
    const Vec3 out = t.cross(n);
    const double d = (a - x).dot(out);
    if (std::abs(d) < 1e-15) continue;
    const double ta = (a - x).dot(t), tb = (b - x).dot(t);
    sum += d * (std::asinh(tb / std::abs(d)) - std::asinh(ta / std::abs(d)));
  }
  return sum;
}

// Centroid rule on 4^depth congruent subtriangles, hat-weighted.
std::array<double, 3> subdivided_moments(const Vec3& x, const std::array<Vec3, 3>& tri, int depth) {
  std::array<double, 3> m{0.0, 0.0, 0.0};
  const int k = 1 << depth;
  const double area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm() / (k * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k - i; ++j)
      for (int up = 0; up < 2; ++up) {
        if (up == 1 && i + j + 1 >= k) continue;
        const double s = up == 0 ? (i + 1.0 / 3.0) / k : (i + 2.0 / 3.0) / k;
        const double t = up == 0 ? (j + 1.0 / 3.0) / k : (j + 2.0 / 3.0) / k;
        const double b[3] = {1.0 - s - t, s, t};
        const Vec3 y = b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2];
        const double f = area / (x - y).norm();
        for (int a = 0; a < 3; ++a) m[a] += f * b[a];
      }
  return m;
}

auto inverse = [](double r) { return 1.0 / r; };

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 12, 64}) {
    const auto& r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    for (int p = 0; p < 2 * n; ++p) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], p);
      CHECK(sum == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rules reach their degree") {
  for (int degree : {1, 2, 5}) {
    const auto& r = triangle_rule(degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        CHECK(apply(r, a, b) == doctest::Approx(monomial_mean(a, b)).epsilon(1e-13));
  }
  const auto& c = collapsed_gauss_rule(6);
  CHECK(c.weights.size() == 36);
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b)
      CHECK(apply(c, a, b) == doctest::Approx(monomial_mean(a, b)).epsilon(1e-12));
}

TEST_CASE("closest point on a triangle") {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  auto check = [&](const Vec3& x, const Vec3& expect) {
    const auto w = closest_point_barycentric(x, a, b, c);
    CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0));
    CHECK((w[0] * a + w[1] * b + w[2] * c - expect).norm() < 1e-14);
  };
  check(Vec3(0.2, 0.3, 1.0), Vec3(0.2, 0.3, 0.0));
  check(Vec3(-1.0, -1.0, 0.5), a);
  check(Vec3(2.0, 0.5, 0.0), b);
  check(Vec3(0.5, -2.0, 0.0), Vec3(0.5, 0.0, 0.0));
  check(Vec3(1.0, 1.0, 0.0), Vec3(0.5, 0.5, 0.0));
}

TEST_CASE("duffy moments of 1/r, singular point at a vertex") {
  const std::array<Vec3, 3> tri{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const auto m = duffy_moments(tri[0], tri, inverse);
  const double exact = std::sqrt(2.0) * std::log(1.0 + std::sqrt(2.0));
  CHECK((m[0] + m[1] + m[2]) == doctest::Approx(exact).epsilon(1e-6));
  CHECK(m[1] == doctest::Approx(m[2]).epsilon(1e-12));
}

TEST_CASE("duffy moments of 1/r, singular point inside and on an edge") {
  const std::array<Vec3, 3> tri{Vec3(0.1, -0.2, 0.3), Vec3(1.3, 0.1, 0.2), Vec3(0.4, 0.9, -0.1)};
  const Vec3 inside = 0.2 * tri[0] + 0.5 * tri[1] + 0.3 * tri[2];
  const Vec3 edge = 0.6 * tri[0] + 0.4 * tri[1];
  for (const Vec3& x : {inside, edge, Vec3(tri[2])}) {
    const auto m = duffy_moments(x, tri, inverse);
    CHECK((m[0] + m[1] + m[2]) == doctest::Approx(planar_inverse_distance(x, tri)).epsilon(1e-6));
  }
}

TEST_CASE("duffy moments agree with brute-force subdivision off the triangle") {
  const std::array<Vec3, 3> tri{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.3, 0.8, 0)};
  for (const Vec3& x : {Vec3(0.4, 0.3, 0.2), Vec3(1.5, 1.0, 0.05), Vec3(0.2, 0.2, 2.0)}) {
    const auto m = duffy_moments(x, tri, inverse);
    const auto ref = subdivided_moments(x, tri, 8);
    for (int a = 0; a < 3; ++a) CHECK(m[a] == doctest::Approx(ref[a]).epsilon(2e-5));
  }
}

TEST_CASE("segment log moments") {
  const Vec3 p(0.0, 0.0, 0.0), q(2.0, 0.0, 0.0);
  // on the segment: int_0^L log|s - s0| ds in closed form
  const double L = 2.0, s0 = 0.7;
  auto prim = [](double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)) - u; };
  const double total = prim(L - s0) - prim(-s0);
  const auto m = segment_log_moments(Vec3(s0, 0.0, 0.0), p, q);
  CHECK((m[0] + m[1]) == doctest::Approx(total).epsilon(1e-12));
  // first moment: int s log|s - s0| ds / L, integrated by parts
  auto prim1 = [](double u, double c) {
    // int (u + c) log|u| du
    const double lg = u == 0.0 ? 0.0 : std::log(std::abs(u));
    return 0.5 * u * u * lg - 0.25 * u * u + c * (u * lg - u);
  };
  const double first = (prim1(L - s0, s0) - prim1(-s0, s0)) / L;
  CHECK(m[1] == doctest::Approx(first).epsilon(1e-12));

  // off the segment: composite Gauss reference
  const Vec3 x(0.5, 0.3, 0.0);
  const auto off = segment_log_moments(x, p, q);
  const auto& g = gauss_legendre(32);
  double r0 = 0.0, r1 = 0.0;
  const int pieces = 64;
  for (int k = 0; k < pieces; ++k)
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double t = (k + g.nodes[i]) / pieces;
      const double w = g.weights[i] * L / pieces;
      const double f = std::log((p + t * (q - p) - x).norm());
      r0 += w * f * (1.0 - t);
      r1 += w * f * t;
    }
  CHECK(off[0] == doctest::Approx(r0).epsilon(1e-10));
  CHECK(off[1] == doctest::Approx(r1).epsilon(1e-10));
}
