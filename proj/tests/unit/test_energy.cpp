#include <doctest.h>

#include <cmath>

#include <gamow/energy.hpp>
#include <gamow/flow.hpp>
#include <gamow/measures.hpp>
#include <gamow/shapes.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gamow;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Unit ball at level 4 with gamma-free fields computed once.
struct BallFields {
  Boundary b = fixture::sphere(4);
  EnergyReport base = evaluate(b, 0.0);
  EnergyReport at(double gamma) const { return assemble_report(b, gamma, base.potential, base.nonlocal); }
};

const BallFields& ball() {
  static const BallFields f;
  return f;
}

Boundary perturbed(int seed, int level = 3) {
  PerturbedBall pb;
  const double a = 0.05 * (1 + seed % 3);
  pb.amplitudes[{2, seed % 3 - 1}] = a;
  pb.amplitudes[{3, 1 - seed % 2}] = -0.5 * a;
  return tessellate({3, pb, level});
}

}  // namespace

TEST_CASE("ball multiplier and residual") {
  const auto r = ball().at(0.5);
  CHECK(rel(r.lambda, 7.0 / 3.0) < 0.01);
  CHECK(r.residual_linf <= 0.05);
  CHECK(r.relative_residual() <= 1e-2);
  CHECK(r.gamma == 0.5);
  CHECK(r.dimension == 3);
}

TEST_CASE("ball Lagrange identity both sides") {
  const auto r = ball().at(1.0);
  const double lhs = 3.0 * r.lambda * r.volume;
  const double rhs = 2.0 * r.perimeter + 5.0 * r.nonlocal;
  CHECK(rel(lhs, 32.0 * pi / 3.0) < 0.01);
  CHECK(rel(rhs, 32.0 * pi / 3.0) < 0.01);
  CHECK(lagrange_identity_residual(r) == doctest::Approx(lhs - rhs));
  for (double g : {0.0, 1.0, 5.0}) {
    const auto rg = ball().at(g);
    CHECK(std::abs(lagrange_identity_residual(rg)) <= 1e-2 * rg.energy);
  }
}

TEST_CASE("evaluate matches assembled reports") {
  const auto s = fixture::sphere(2);
  const auto direct = evaluate(s, 0.7);
  const auto base = evaluate(s, 0.0);
  const auto built = assemble_report(s, 0.7, base.potential, base.nonlocal);
  CHECK(direct.energy == built.energy);
  CHECK(direct.lambda == built.lambda);
  CHECK((direct.residual - built.residual).norm() == 0.0);
  CHECK(lagrange_identity_residual(s, 0.7) == lagrange_identity_residual(direct));
}

TEST_CASE("ellipsoid is not critical") {
  const auto e = fixture::ellipsoid(Vec3(2.0, 1.0, 1.0), 3);
  const auto r = evaluate(e, 0.0);
  CHECK(r.residual_l2 > 0.3);
  const auto r1 = evaluate(e, 1.0);
  CHECK(std::isfinite(lagrange_identity_residual(r1)));
  CHECK(r1.relative_residual() > 1e-2);
}

TEST_CASE("report invariants") {
  for (int seed = 0; seed < 3; ++seed) {
    const auto b = perturbed(seed, 2);
    const auto r = evaluate(b, 0.3 * seed);
    CHECK(r.energy == r.perimeter + r.gamma * r.nonlocal);
    const VectorX& a = b.vertex_areas();
    CHECK(std::abs(a.dot(r.residual)) <= 1e-12 * a.dot(r.residual.cwiseAbs()));
    CHECK(r.residual_linf >= r.residual_l2 / std::sqrt(r.perimeter));
    CHECK(r.residual_linf == doctest::Approx(r.residual.cwiseAbs().maxCoeff()));
    CHECK(r.residual_l2 == doctest::Approx(std::sqrt(a.dot(r.residual.cwiseAbs2()))));
    CHECK(r.volume == doctest::Approx(volume(b)));
    CHECK(r.perimeter == doctest::Approx(perimeter(b)));
  }
}

TEST_CASE("multiplier is affine in gamma with slope 2<v>") {
  const auto b = perturbed(1, 2);
  const auto r0 = evaluate(b, 0.0);
  const VectorX& a = b.vertex_areas();
  const double mean_v = a.dot(r0.potential) / a.sum();
  for (double g : {0.5, 2.0, 7.0}) {
    const auto rg = assemble_report(b, g, r0.potential, r0.nonlocal);
    CHECK(std::abs(rg.lambda - r0.lambda - 2.0 * g * mean_v) <= 1e-10 * std::abs(rg.lambda));
  }
}

TEST_CASE("reports are invariant under rigid motion") {
  const auto b = perturbed(2, 3);
  const auto m = b.moved(fixture::rotation(), Vec3(-3.0, 1.0, 0.5));
  const auto r = evaluate(b, 0.8);
  const auto q = evaluate(m, 0.8);
  for (auto [x, y] : {std::pair{r.perimeter, q.perimeter}, std::pair{r.nonlocal, q.nonlocal},
                      std::pair{r.energy, q.energy}, std::pair{r.volume, q.volume},
                      std::pair{r.lambda, q.lambda}, std::pair{r.residual_l2, q.residual_l2},
                      std::pair{r.residual_linf, q.residual_linf},
                      std::pair{r.lambda_bound_gap, q.lambda_bound_gap}})
    CHECK(rel(y, x) <= 1e-10);
  CHECK((r.potential - q.potential).lpNorm<Eigen::Infinity>() <= 1e-10 * r.potential.maxCoeff());
}

TEST_CASE("scaling derivative") {
  const auto& f = ball();
  const auto s1 = scaling_derivative(f.b, 1.0);
  CHECK(s1.relative_gap() <= 1e-3);
  CHECK(rel(s1.formula, 32.0 * pi / 3.0) < 0.01);
  CHECK(s1.step == 1e-4);

  // independent central difference of J along the dilation
  const auto b = perturbed(4);
  auto J = [&](double t) {
    const auto r = evaluate(b.scaled(1.0 + t), 0.3);
    return r.energy;
  };
  const double fd = oracle::derivative(J, 0.0, 1e-4);
  const auto s = scaling_derivative(b, 0.3);
  CHECK(s.relative_gap() <= 2e-3);
  CHECK(rel(s.finite_difference, fd) < 1e-8);

  const auto s0 = scaling_derivative(b, 0.0);
  CHECK(s0.formula == doctest::Approx(2.0 * perimeter(b)).epsilon(1e-14));
  CHECK(s0.relative_gap() <= 1e-3);

  CHECK_THROWS_AS(scaling_derivative(fixture::circle(64), 1.0), Unsupported);
  CHECK_THROWS_AS(scaling_derivative(b, 1.0, 0.0), InvalidInput);
}

TEST_CASE("lambda bound gap") {
  const auto r1 = ball().at(1.0);
  const auto g1 = lambda_bound_gap(r1);
  CHECK(std::abs(g1.gap - 2.0 / 3.0) < 0.01);
  CHECK(g1.ratio == doctest::Approx(g1.gap));
  CHECK(r1.lambda_bound_gap == doctest::Approx(g1.gap));

  CHECK(lambda_bound_gap(ball().at(0.0)).gap <= 1e-2);
  CHECK(rel(lambda_bound_gap(ball().at(0.1)).ratio, 2.0 / 3.0) < 0.05);

  const double c = 2.0 * g1.ratio;
  for (double g : {0.1, 0.5, 5.0}) CHECK(lambda_bound_gap(ball().at(g)).gap <= c * g);
}

TEST_CASE("one accepted flow step lowers the energy") {
  const auto e = fixture::ellipsoid(Vec3(1.3, 1.0, 0.9), 2);
  const auto before = evaluate(e, 0.5);
  const auto st = step(e, 0.5);
  CHECK(st.energy_after <= st.energy_before);
  CHECK(st.energy_before == doctest::Approx(before.energy));
  CHECK(evaluate(st.boundary, 0.5).energy < before.energy);
}
