#include <doctest.h>

#include <gamow/diagnostics.hpp>
#include <gamow/measures.hpp>

#include <cmath>
#include <map>
#include <tuple>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gamow;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int nearest_vertex(const Boundary& b, const Vec3& x) {
  int best = 0;
  for (std::size_t i = 1; i < b.vertex_count(); ++i)
    if ((b.vertex(i) - x).norm() < (b.vertex(best) - x).norm()) best = static_cast<int>(i);
  return best;
}

// Surface of [-1, 1]^3 with a k x k grid on every face.
Boundary cube(int k) {
  std::map<std::tuple<long, long, long>, int> index;
  std::vector<Vec3> pts;
  auto vertex = [&](const Vec3& p) {
    const auto key = std::make_tuple(std::lround(p.x() * 1e6), std::lround(p.y() * 1e6),
                                     std::lround(p.z() * 1e6));
    auto [it, fresh] = index.try_emplace(key, static_cast<int>(pts.size()));
    if (fresh) pts.push_back(p);
    return it->second;
  };
  std::vector<std::array<int, 3>> tris;
  for (int axis = 0; axis < 3; ++axis)
    for (int side : {-1, 1}) {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      auto at = [&](int i, int j) {
        Vec3 p;
        p[axis] = side;
        p[u] = -1.0 + 2.0 * i / k;
        p[v] = -1.0 + 2.0 * j / k;
        return vertex(p);
      };
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const int a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
          std::array<int, 3> t1{a, b, c}, t2{a, c, d};
          if (side < 0) {
            std::swap(t1[1], t1[2]);
            std::swap(t2[1], t2[2]);
          }
          tris.push_back(t1);
          tris.push_back(t2);
        }
    }
  return Boundary::surface(std::move(pts), std::move(tris));
}

}  // namespace

TEST_CASE("excess on the sphere matches the cap identity") {
  const auto s = fixture::sphere(4);
  for (const Vec3& d : {Vec3(0, 0, 1), Vec3(1, 1, 0).normalized(), Vec3(-1, 2, 3).normalized()}) {
    const int v = nearest_vertex(s, d);
    CHECK(local_perimeter(s, s.vertex(v), 0.5) == doctest::Approx(pi * 0.25).epsilon(0.01));
    CHECK(excess(s, s.vertex(v), 0.5) <= 0.02 * pi);
  }
}

TEST_CASE("excess vanishes on a flat patch") {
  const auto c = cube(16);
  const int v = nearest_vertex(c, Vec3(0, 0, 1));
  CHECK(c.vertex(v).isApprox(Vec3(0, 0, 1)));
  CHECK(local_perimeter(c, c.vertex(v), 0.6) == doctest::Approx(pi * 0.36).epsilon(1e-10));
  CHECK(excess(c, c.vertex(v), 0.6) <= 1e-10);
}

TEST_CASE("excess is large near a neck") {
  const auto s = fixture::two_spheres(1.0, 1.0, 0.02, 3);
  const int v = nearest_vertex(s, Vec3(1, 0, 0));
  CHECK(excess(s, s.vertex(v), 0.5) > 0.5);
}

TEST_CASE("excess rejects small radii and off-surface points") {
  const auto s = fixture::sphere(3);
  CHECK_THROWS_AS(excess(s, s.vertex(0), 1.5 * s.max_edge_length()), InvalidInput);
  CHECK_THROWS_AS(excess(s, Vec3::Zero(), 0.5), InvalidInput);
}

TEST_CASE("excess is scale invariant") {
  const auto s = fixture::ellipsoid(Vec3(1.5, 1.0, 0.8), 4);
  const int v = nearest_vertex(s, Vec3(0, 1, 0));
  const double base = excess(s, s.vertex(v), 0.6);
  for (double r : {0.5, 2.0}) {
    const auto t = s.scaled(r);
    CHECK(std::abs(excess(t, t.vertex(v), 0.6 * r) - base) <= 0.01 * std::max(base, 1e-2));
  }
}

TEST_CASE("monotonicity profile on the sphere") {
  const auto s = fixture::sphere(4);
  const int v = nearest_vertex(s, Vec3(0, 0, 1));
  std::vector<double> radii;
  for (double r = 0.3; r <= 1.5 + 1e-12; r += 0.1) radii.push_back(r);
  MonotonicityOptions opts;
  opts.enforce_bound = false;
  const auto p = monotonicity_profile(s, s.vertex(v), 2.0, radii, opts);
  REQUIRE(p.values.size() == radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(p.values[i] == doctest::Approx(pi * std::exp(2.0 * radii[i])).epsilon(0.02));
  CHECK(p.nondecreasing);
  for (std::size_t i = 1; i < radii.size(); ++i) CHECK(p.values[i] > p.values[i - 1]);

  const auto flat = monotonicity_profile(s, s.vertex(v), 0.0, radii, opts);
  for (double x : flat.values) CHECK(x == doctest::Approx(pi).epsilon(0.02));
  CHECK(flat.nondecreasing);
}

TEST_CASE("monotonicity profile on an ellipsoid with C0 = max |H|") {
  const auto e = fixture::ellipsoid(Vec3(1.5, 1.0, 0.8), 4);
  const double c0 = e.curvature().mean.cwiseAbs().maxCoeff();
  const std::vector<double> radii{0.3, 0.45, 0.6, 0.75, 0.9, 1.05, 1.2};
  for (const Vec3& d : {Vec3(1, 0, 0), Vec3(0, 0, 1), Vec3(1, 1, 1).normalized()}) {
    const int v = nearest_vertex(e, d * 2.0);
    const auto p = monotonicity_profile(e, e.vertex(v), c0, radii);
    CHECK(p.curvature_bound_holds);
    CHECK(p.nondecreasing);
  }
}

TEST_CASE("monotonicity profile rejects a small C0") {
  const auto e = fixture::ellipsoid(Vec3(1.5, 1.0, 0.8), 3);
  const std::vector<double> radii{0.5, 0.8};
  CHECK_THROWS_AS(monotonicity_profile(e, e.vertex(0), 1.0, radii), InvalidInput);
  MonotonicityOptions opts;
  opts.enforce_bound = false;
  const auto p = monotonicity_profile(e, e.vertex(0), 1.0, radii, opts);
  CHECK_FALSE(p.curvature_bound_holds);
  CHECK_FALSE(p.violators.empty());
  for (int v : p.violators) CHECK(std::abs(e.curvature().mean[v]) > 1.0);
}

TEST_CASE("Topping check") {
  const auto unit = topping_check(fixture::sphere(4));
  CHECK(unit.diameter == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(unit.integral == doctest::Approx(8.0 * pi).epsilon(0.01));
  CHECK(unit.pass);

  const auto big = topping_check(fixture::sphere(4, 3.0));
  CHECK(big.diameter == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(big.integral == doctest::Approx(24.0 * pi).epsilon(0.01));
  CHECK(big.pass);

  const Vec3 axes(2.0, 0.5, 0.5);
  const auto longe = topping_check(fixture::ellipsoid(axes, 4));
  const double expect =
      oracle::ellipsoid_integral(axes, [](double k1, double k2) { return k1 + k2; });
  CHECK(longe.diameter == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(longe.integral == doctest::Approx(expect).epsilon(0.02));
  CHECK(longe.pass);

  for (const auto& b : {fixture::two_spheres(1.0, 0.5, 0.3), fixture::annulus(1.0, 0.5, 3),
                        fixture::ellipsoid(Vec3(1.5, 1.0, 0.8), 3)})
    CHECK(topping_check(b).pass);
}

TEST_CASE("shape census of the sphere") {
  const auto c = shape_census(fixture::sphere(4));
  CHECK(c.components == 1);
  REQUIRE(c.per_component.size() == 1);
  CHECK(c.per_component[0].area == doctest::Approx(4.0 * pi).epsilon(0.01));
  CHECK(c.willmore == doctest::Approx(8.0 * pi).epsilon(0.01));
  CHECK(c.deficit >= 0.0);
  CHECK(c.deficit <= 0.02 * 8.0 * pi);
  CHECK(c.asphericity <= 1e-3);
  CHECK(c.asphericity_center.norm() <= 1e-3);
  CHECK(c.euler_characteristic == 2);
}

TEST_CASE("shape census of two spheres and an annulus") {
  const auto two = shape_census(fixture::two_spheres(1.0, 1.0, 0.5, 4));
  CHECK(two.components == 2);
  REQUIRE(two.per_component.size() == 2);
  CHECK(two.willmore == doctest::Approx(16.0 * pi).epsilon(0.01));
  for (const auto& p : two.per_component) {
    CHECK(p.willmore == doctest::Approx(8.0 * pi).epsilon(0.01));
    CHECK(p.euler_characteristic == 2);
  }
  CHECK(two.euler_characteristic == 4);

  const auto ann = shape_census(fixture::annulus(1.0, 0.5, 3));
  CHECK(ann.components == 2);
  CHECK(ann.euler_characteristic == 4);
}

TEST_CASE("shape census of a 2:1 ellipsoid") {
  const Vec3 axes(2.0, 1.0, 1.0);
  const auto c = shape_census(fixture::ellipsoid(axes, 4));
  const double w =
      oracle::ellipsoid_integral(axes, [](double k1, double k2) { return k1 * k1 + k2 * k2; });
  const double d = oracle::ellipsoid_integral(
      axes, [](double k1, double k2) { return (k1 - k2) * (k1 - k2); });
  CHECK(w > 8.0 * pi);
  CHECK(d > 1.0);
  CHECK(c.willmore == doctest::Approx(w).epsilon(0.02));
  CHECK(c.deficit == doctest::Approx(d).epsilon(0.05));
  CHECK(c.willmore > 8.0 * pi);
  CHECK(c.deficit > 1.0);
  CHECK(c.asphericity > 0.05);
}

TEST_CASE("willmore and deficit are scale invariant") {
  const auto e = fixture::ellipsoid(Vec3(1.5, 1.0, 0.8), 3);
  const auto base = shape_census(e);
  for (double r : {0.5, 2.0}) {
    const auto c = shape_census(e.scaled(r));
    CHECK(rel(c.willmore, base.willmore) <= 0.01);
    CHECK(rel(c.deficit, base.deficit) <= 0.01);
    CHECK(c.asphericity == doctest::Approx(base.asphericity * r * r).epsilon(0.01));
  }
}

TEST_CASE("umbilicity identity holds pointwise") {
  for (const auto& b : {fixture::sphere(3), fixture::ellipsoid(Vec3(2.0, 1.0, 0.7), 3),
                        fixture::two_spheres(1.0, 0.6, 0.2)}) {
    const auto& k = b.curvature();
    for (std::size_t i = 0; i < b.vertex_count(); ++i) {
      const double lhs = std::pow(k.kappa1[i] - k.kappa2[i], 2);
      const double rhs = 2.0 * k.second_form[i] - k.mean[i] * k.mean[i];
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, k.second_form[i]));
    }
    const auto c = shape_census(b);
    CHECK(c.willmore >= c.half_mean_square);
    CHECK(2.0 * c.half_mean_square >= 16.0 * pi * 0.98);
    CHECK(c.deficit >= 0.0);
    CHECK(std::abs(c.deficit - 2.0 * (c.willmore - c.half_mean_square)) <= 1e-8 * c.willmore);
  }
}

TEST_CASE("component counts match construction") {
  CHECK(shape_census(fixture::sphere(2)).components == 1);
  CHECK(shape_census(fixture::two_spheres(1.0, 0.4, 0.3, 2)).components == 2);
  CHECK(shape_census(fixture::circle(64)).components == 1);
}

TEST_CASE("diagnose with defaults") {
  const auto s = fixture::sphere(4);
  const auto r = diagnose(s);
  CHECK(r.dimension == 3);
  CHECK(r.diameter == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.topping.pass);
  CHECK(r.census.components == 1);
  CHECK(r.excess.size() == 3);
  for (const auto& p : r.excess) {
    CHECK(p.radius == doctest::Approx(0.5 * volume_equivalent_radius(s)).epsilon(1e-12));
    CHECK(p.value <= 0.02 * pi);
  }
  CHECK(r.monotonicity_pass);

  DiagnosticsOptions opts;
  opts.probe_vertices = {static_cast<int>(s.vertex_count())};
  CHECK_THROWS_AS(diagnose(s, opts), InvalidInput);
}
