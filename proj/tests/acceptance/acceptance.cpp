// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <gamow/diagnostics.hpp>
#include <gamow/energy.hpp>
#include <gamow/flow.hpp>
#include <gamow/measures.hpp>
#include <gamow/potential.hpp>
#include <gamow/shapes.hpp>
#include <gamow/stability.hpp>
#include <gamow_cli.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gamow;
namespace fs = std::filesystem;
using cli::json;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [FAILED: " << what << "]";
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Perturbed ball with seeded amplitudes in [-0.1, 0.1], rescaled to the
// volume of the unit ball.
Boundary random_ball(std::uint64_t seed, int level) {
  static const std::vector<std::pair<int, int>> modes{{2, 0}, {2, 1}, {2, -2}, {3, 0},
                                                      {3, 2}, {4, -1}, {4, 3}};
  const auto u = cli::seeded_uniforms(seed, modes.size());
  PerturbedBall pb;
  for (std::size_t i = 0; i < modes.size(); ++i) pb.amplitudes[modes[i]] = 0.1 * (2.0 * u[i] - 1.0);
  const Boundary b = tessellate({3, pb, level});
  return b.scaled(std::cbrt(4.0 * pi / 3.0 / volume(b)), centroid(b));
}

const CriticalResult& rigidity_flow() {
  static const CriticalResult r = [] {
    PerturbedBall pb;
    pb.amplitudes[{2, 0}] = 0.15;
    FlowOptions o;
    o.tolerance = 2e-3;
    return find_critical(tessellate({3, pb, 3}), 0.1, o);
  }();
  return r;
}

void potential_oracles(Outcome& out) {
  const auto s = fixture::sphere(4);
  const auto f = potential_field(s);
  const double v_err = (f.value.array() - 1.0 / 3.0).abs().maxCoeff() * 3.0;
  const double dv_err = (f.normal_derivative.array() + 1.0 / 3.0).abs().maxCoeff() * 3.0;
  const double nl_err = rel(nonlocal_energy(s), oracle::ball_nonlocal(1.0));
  const auto d = fixture::circle(256);
  const auto g = potential_field(d);
  // v vanishes on the circle; measured against the scale max v = v(0) = 1/4.
  const double dv_disk = g.value.cwiseAbs().maxCoeff() / 0.25;
  const double dn_disk = (g.normal_derivative.array() + 0.5).abs().maxCoeff() * 2.0;
  out.detail << "ball " << s.vertex_count() << " vertices: v " << v_err << ", dv " << dv_err
             << ", NL " << nl_err << "; disk " << d.vertex_count() << " points: v " << dv_disk
             << ", dv " << dn_disk << " (relative errors)";
  out.require(s.vertex_count() <= 3000, "vertex budget");
  for (double e : {v_err, dv_err, nl_err, dv_disk, dn_disk}) out.require(e <= 0.01, "1% bound");
}

void scaling_identity(Outcome& out) {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto b = random_ball(seed, 3);
    for (double g : {0.0, 0.3, 1.0}) worst = std::max(worst, scaling_derivative(b, g).relative_gap());
  }
  out.detail << "30 cases, worst relative gap " << worst;
  out.require(worst <= 2e-3, "gap <= 0.2%");
}

void lagrange_identity(Outcome& out) {
  const auto s = fixture::sphere(4);
  const VectorX v = potential_on_vertices(s);
  const double nl = nonlocal_energy(s);
  for (double g : {0.0, 1.0, 5.0}) {
    const auto r = assemble_report(s, g, v, nl);
    const double x = std::abs(lagrange_identity_residual(r)) / r.energy;
    out.detail << "ball gamma " << g << ": " << x << "; ";
    out.require(x <= 0.01, "ball residual");
  }
  const auto& f = rigidity_flow();
  out.require(f.converged, "flow converged");
  const double x = std::abs(lagrange_identity_residual(f.report)) / f.report.energy;
  out.detail << "flow critical shape: " << x << " (residual / J)";
  out.require(x <= 0.01, "flow residual");
}

void ball_spectrum(Outcome& out) {
  const auto s = fixture::sphere(3);
  const auto base = assemble(s, 0.0);
  double worst = 0.0, worst_null = 0.0;
  for (double g : {0.0, 0.5, 1.0}) {
    const auto r = spectrum(base.with_gamma(g), 15);
    int index = 0;
    for (int l = 1; l <= 3; ++l)
      for (int j = 0; j < 2 * l + 1; ++j, ++index) {
        if (l == 1)
          worst_null = std::max(worst_null, std::abs(r.values[index]));
        else
          worst = std::max(worst, rel(r.values[index], ball_mode_eigenvalue(3, l, g)));
      }
    out.require(r.verdict == Verdict::stable, "sphere verdict");
  }
  const auto rd = spectrum(assemble(fixture::circle(256), 0.0), 10);
  double worst_disk = 0.0, null_disk = std::max(std::abs(rd.values[0]), std::abs(rd.values[1]));
  for (int k = 2; k <= 5; ++k)
    for (int j : {2 * k - 2, 2 * k - 1})
      worst_disk = std::max(worst_disk, rel(rd.values[j], ball_mode_eigenvalue(2, k, 0.0)));
  out.detail << "sphere " << s.vertex_count() << " vertices: l=2,3 worst " << worst
             << ", translations " << worst_null << "; disk k<=5 worst " << worst_disk
             << ", translations " << null_disk;
  out.require(worst <= 0.03, "sphere modes within 3%");
  out.require(worst_null <= 0.1, "sphere translations");
  out.require(worst_disk <= 0.02, "disk modes within 2%");
  out.require(null_disk <= 0.1, "disk translations");
}

void disconnected(Outcome& out) {
  const auto pair = fixture::two_spheres(1.0, 1.0, 1.0, 3);
  const auto t = two_component_test(pair, 0.05);
  const auto t0 = two_component_test(pair, 0.0);
  const auto r = spectrum(assemble(pair, 0.05), 4);
  out.detail << "test(0.05) " << t.value << ", mu_1 " << r.values[0] << " " << to_string(r.verdict)
             << ", test(0) / (-16 pi) - 1 = " << t0.value / (-16.0 * pi) - 1.0;
  out.require(t.value <= -40.0, "test <= -40");
  out.require(r.verdict == Verdict::unstable, "verdict unstable");
  out.require(rel(t0.value, -16.0 * pi) <= 0.02, "gamma -> 0 limit");
}

void rigidity(Outcome& out) {
  const auto& r = rigidity_flow();
  const auto c = shape_census(r.boundary);
  const double rr = r.report.relative_residual();
  out.detail << to_string(r.status) << " after " << r.trace.records.back().step
             << " steps: residual " << rr << ", asphericity " << c.asphericity
             << ", willmore / 8pi - 1 = " << c.willmore / (8.0 * pi) - 1.0;
  out.require(r.converged, "converged");
  out.require(rr <= 1e-2, "residual");
  out.require(c.asphericity <= 1e-3, "asphericity");
  out.require(rel(c.willmore, 8.0 * pi) <= 0.02, "willmore");
}

void annulus(Outcome& out) {
  const double v = 4.0 * pi / 3.0;
  const auto a = annulus_critical(40.0, v);
  out.require(a.exists, "root at gamma 40");
  if (!a.exists) return;
  const auto r = evaluate(fixture::annulus(a.outer, a.inner, 4), 40.0);
  const auto none = annulus_critical(0.01, v);
  out.detail << "gamma 40: rho/R " << a.inner / a.outer << ", residual " << a.residual
             << ", tessellated residual " << r.relative_residual() << "; gamma 0.01: "
             << none.message;
  out.require(a.residual <= 1e-10, "radial residual");
  out.require(r.relative_residual() <= 2e-2, "tessellated residual");
  out.require(!none.exists, "nonexistence at 0.01");
}

int nearest_vertex(const Boundary& b, const Vec3& x) {
  int best = 0;
  for (std::size_t i = 1; i < b.vertex_count(); ++i)
    if ((b.vertex(i) - x).norm() < (b.vertex(best) - x).norm()) best = static_cast<int>(i);
  return best;
}

void diagnostics(Outcome& out) {
  const auto s = fixture::sphere(4);
  double worst_excess = 0.0;
  for (const Vec3& d : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(1, -2, 2).normalized()})
    worst_excess = std::max(worst_excess, excess(s, s.vertex(nearest_vertex(s, d)), 0.5) / pi);
  out.require(worst_excess <= 0.02, "sphere excess");

  const auto e = fixture::ellipsoid(Vec3(1.5, 1.0, 0.8), 4);
  const std::vector<double> radii{0.3, 0.45, 0.6, 0.75, 0.9, 1.05, 1.2};
  bool mono = true;
  for (const auto* b : {&s, &e}) {
    const double c0 = b->curvature().mean.cwiseAbs().maxCoeff();
    for (const Vec3& d : {Vec3(1, 0, 0), Vec3(0, 0, 1), Vec3(1, 1, 1).normalized()})
      mono = mono && monotonicity_profile(*b, b->vertex(nearest_vertex(*b, 2.0 * d)), c0, radii)
                         .nondecreasing;
  }
  out.require(mono, "monotonicity");

  PerturbedBall pb;
  pb.amplitudes[{2, 0}] = 0.15;
  pb.amplitudes[{3, 1}] = 0.1;
  bool topping = true;
  for (const auto& b : {s, fixture::sphere(3, 3.0), e, fixture::ellipsoid(Vec3(2.0, 0.5, 0.5), 4),
                        fixture::two_spheres(1.0, 0.5, 0.3), fixture::annulus(1.0, 0.5, 3),
                        tessellate({3, pb, 3})})
    topping = topping && topping_check(b).pass;
  out.require(topping, "Topping");

  const auto cs = shape_census(s);
  const auto c2 = shape_census(fixture::two_spheres(1.0, 1.0, 0.5, 4));
  out.detail << "excess/pi " << worst_excess << ", monotone " << mono << ", Topping " << topping
             << ", willmore sphere / 8pi - 1 = " << cs.willmore / (8.0 * pi) - 1.0
             << ", two spheres / 16pi - 1 = " << c2.willmore / (16.0 * pi) - 1.0
             << ", deficit / willmore " << cs.deficit / cs.willmore;
  out.require(rel(cs.willmore, 8.0 * pi) <= 0.01, "sphere willmore");
  out.require(rel(c2.willmore, 16.0 * pi) <= 0.01, "two-sphere willmore");
  out.require(cs.deficit <= 0.02 * cs.willmore, "sphere deficit");
}

void rearrangement(Outcome& out) {
  double worst = 0.0;
  for (std::uint64_t seed = 101; seed <= 120; ++seed) {
    const auto b = random_ball(seed, 3);
    worst = std::max(worst, nonlocal_energy(b) / oracle::ball_nonlocal(volume_equivalent_radius(b)));
  }
  out.detail << "20 shapes, max NL / NL(ball) = " << worst;
  out.require(worst <= 1.01, "NL <= 1.01 NL(ball)");
}

std::vector<json> suite_configs() {
  const json ball{{"type", "ball"}, {"resolution", 3}};
  const json pair{{"type", "ball_union"},
                  {"resolution", 2},
                  {"balls", {{{"center", {0, 0, 0}}, {"radius", 1}}, {{"center", {3, 0, 0}}, {"radius", 1}}}}};
  return {
      {{"kind", "energy"}, {"shape", {{"type", "ellipsoid"}, {"resolution", 3}}}, {"gammas", {0.0, 0.5}},
       {"options", {{"scaling", true}}}},
      {{"kind", "energy"},
       {"shape", ball},
       {"perturbation", {{"modes", {{2, 0}, {3, 1}}}, {"amplitude", 0.1}, {"volume_normalize", true}}},
       {"seed", 11},
       {"gamma", 0.3}},
      {{"kind", "spectrum"}, {"shape", ball}, {"gamma", 0.5}, {"options", {{"k", 8}}}},
      {{"kind", "spectrum"}, {"shape", pair}, {"gamma", 0.05}, {"options", {{"k", 4}}}},
      {{"kind", "flow"},
       {"shape", {{"type", "perturbed_ball"}, {"resolution", 2}, {"amplitudes", {{2, 0, 0.15}}}}},
       {"gamma", 0.1}},
      {{"kind", "diagnose"}, {"shape", {{"type", "ellipsoid"}, {"resolution", 3}}}},
      {{"kind", "annulus"}, {"gamma", 40.0}, {"options", {{"cross_check_resolution", 2}}}},
      {{"kind", "ball-oracle"}, {"gammas", {0.0, 1.0}}},
      {{"kind", "sweep"}, {"shape", pair}, {"gammas", {0.01, 0.05, 0.1, 0.2}}, {"options", {{"k", 4}}}},
  };
}

// Largest relative difference between matching numbers; -1 on a structural mismatch.
double json_gap(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (x == y) return 0.0;
    return std::abs(x - y) / std::max(std::abs(x), std::abs(y));
  }
  if (a.type() != b.type() || a.size() != b.size()) return -1.0;
  double worst = 0.0;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return -1.0;
      const double g = json_gap(it.value(), b[it.key()]);
      if (g < 0.0) return g;
      worst = std::max(worst, g);
    }
  } else if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double g = json_gap(a[i], b[i]);
      if (g < 0.0) return g;
      worst = std::max(worst, g);
    }
  } else if (a != b) {
    return -1.0;
  }
  return worst;
}

void reproducibility(Outcome& out) {
  const fs::path root = fs::temp_directory_path() / "gamow_acceptance";
  fs::remove_all(root);
  const auto configs = suite_configs();
  int identical = 0, files = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto config = cli::parse_config(configs[i]);
    std::vector<cli::RunOutcome> runs;
    for (int t : {1, 1, 4}) {
      cli::RunFlags flags;
      flags.threads = t;
      runs.push_back(cli::run(config, flags, root / std::to_string(i) / std::to_string(runs.size())));
      out.require(runs.back().exit_code == cli::exit_ok, "run " + std::to_string(i) + ": " + runs.back().message);
    }
    const auto& a = runs[0].artifacts;
    const auto& b = runs[1].artifacts;
    bool same = a.size() == b.size() && !a.empty();
    for (std::size_t k = 0; same && k < a.size(); ++k)
      same = a[k].path == b[k].path && a[k].sha256 == b[k].sha256;
    identical += same;
    files += static_cast<int>(a.size());
    const double gap = json_gap(runs[0].result, runs[2].result);
    out.require(gap >= 0.0, "threaded result structure " + std::to_string(i));
    worst = std::max(worst, gap);
  }
  out.detail << identical << "/" << configs.size() << " configs byte-identical single-threaded ("
             << files << " files), worst 4-thread relative gap " << worst;
  out.require(identical == static_cast<int>(configs.size()), "byte-identical reruns");
  out.require(worst <= 1e-10, "threaded agreement");
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "potential oracles", 10.0, potential_oracles},
      {2, "scaling identity", 60.0, scaling_identity},
      {3, "Lagrange identity", 60.0, lagrange_identity},
      {4, "ball and disk spectrum", 300.0, ball_spectrum},
      {5, "disconnected sets are unstable", 120.0, disconnected},
      {6, "flow rigidity at small gamma", 600.0, rigidity},
      {7, "annulus criticality", 120.0, annulus},
      {8, "diagnostics suite", 300.0, diagnostics},
      {9, "rearrangement maximality", 300.0, rearrangement},
      {10, "reproducibility", 600.0, reproducibility},
  };
  // The flow feeds criteria 3 and 6; its time is charged to 6.
  const auto f0 = std::chrono::steady_clock::now();
  rigidity_flow();
  const double flow_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - f0).count();

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail << " [EXCEPTION: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 6) secs += flow_secs;
    if (secs > c.budget) {
      out.ok = false;
      out.detail << " [FAILED: over the " << c.budget << " s budget]";
    }
    failed += !out.ok;
    std::printf("%s %2d %s (%.1f s): %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
