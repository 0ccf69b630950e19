#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "gamow/measures.hpp"
#include "gamow/mesh_io.hpp"
#include "gamow_cli.hpp"

namespace gamow::cli {

namespace {

Vec3 parse_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw ConfigError(std::string(what) + " must be an array of 2 or 3 numbers");
  Vec3 p = Vec3::Zero();
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + " must contain numbers");
    p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return p;
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

Ball parse_ball(const json& j) {
  Ball b;
  if (j.contains("center")) b.center = parse_point(j["center"], "center");
  b.radius = number(j, "radius", 1.0);
  return b;
}

}  // namespace

ShapeSpec parse_shape(const json& j) {
  if (!j.is_object()) throw ConfigError("shape must be an object");
  ShapeSpec spec;
  spec.dimension = static_cast<int>(number(j, "dimension", 3));
  if (spec.dimension != 2 && spec.dimension != 3) throw ConfigError("dimension must be 2 or 3");
  spec.resolution = static_cast<int>(number(j, "resolution", spec.dimension == 3 ? 3 : 256));
  const std::string type = j.value("type", "");
  if (type == "ball") {
    spec.shape = parse_ball(j);
  } else if (type == "ball_union") {
    if (!j.contains("balls") || !j["balls"].is_array()) throw ConfigError("ball_union needs balls");
    BallUnion u;
    for (const auto& b : j["balls"]) u.balls.push_back(parse_ball(b));
    spec.shape = u;
  } else if (type == "annulus") {
    Annulus a;
    if (j.contains("center")) a.center = parse_point(j["center"], "center");
    a.outer = number(j, "outer", 1.0);
    a.inner = number(j, "inner", 0.5);
    spec.shape = a;
  } else if (type == "ellipsoid") {
    Ellipsoid e;
    if (j.contains("center")) e.center = parse_point(j["center"], "center");
    if (j.contains("semi_axes")) e.semi_axes = parse_point(j["semi_axes"], "semi_axes");
    spec.shape = e;
  } else if (type == "perturbed_ball") {
    PerturbedBall p;
    if (j.contains("center")) p.center = parse_point(j["center"], "center");
    p.radius = number(j, "radius", 1.0);
    if (j.contains("amplitudes")) {
      for (const auto& a : j["amplitudes"]) {
        if (!a.is_array() || a.size() != 3) throw ConfigError("amplitudes entries are [l, m, value]");
        p.amplitudes[{a[0].get<int>(), a[1].get<int>()}] = a[2].get<double>();
      }
    }
    spec.shape = p;
  } else {
    throw ConfigError("unknown shape type '" + type + "'");
  }
  return spec;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.raw = j;
  c.kind = j.value("kind", "");
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
    throw ConfigError("unknown experiment kind '" + c.kind + "'");

  const bool has_shape = j.contains("shape"), has_mesh = j.contains("mesh");
  const bool needs_shape = c.kind != "annulus" && c.kind != "ball-oracle";
  if (has_shape && has_mesh) throw ConfigError("give exactly one of shape or mesh");
  if (needs_shape && !has_shape && !has_mesh) throw ConfigError("a shape or mesh is required");
  if (has_shape) c.shape = parse_shape(j["shape"]);
  if (has_mesh) {
    if (!j["mesh"].is_string()) throw ConfigError("mesh must be a path");
    c.mesh = j["mesh"].get<std::string>();
  }

  if (j.contains("perturbation")) {
    const auto& p = j["perturbation"];
    PerturbationSpec ps;
    if (!p.contains("modes") || !p["modes"].is_array()) throw ConfigError("perturbation needs modes");
    for (const auto& m : p["modes"]) {
      if (!m.is_array() || m.size() != 2) throw ConfigError("perturbation modes are [l, m] pairs");
      ps.modes.push_back({m[0].get<int>(), m[1].get<int>()});
    }
    ps.amplitude = number(p, "amplitude", 0.0);
    ps.volume_normalize = p.value("volume_normalize", false);
    if (!(ps.amplitude >= 0.0)) throw ConfigError("perturbation amplitude must be nonnegative");
    if (!c.shape) throw ConfigError("perturbation requires an analytic shape");
    c.perturbation = ps;
  }

  if (j.contains("gamma") && j.contains("gammas")) throw ConfigError("give gamma or gammas, not both");
  if (j.contains("gamma")) {
    if (!j["gamma"].is_number()) throw ConfigError("gamma must be a number");
    c.gammas = {j["gamma"].get<double>()};
  } else if (j.contains("gammas")) {
    if (!j["gammas"].is_array()) throw ConfigError("gammas must be an array");
    for (const auto& g : j["gammas"]) {
      if (!g.is_number()) throw ConfigError("gammas must contain numbers");
      c.gammas.push_back(g.get<double>());
    }
  } else {
    c.gammas = {0.0};
  }
  for (double g : c.gammas)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("gamma must be finite and nonnegative");
  if (c.kind == "sweep" && c.gammas.size() < 2) throw ConfigError("sweep needs at least two gamma values");
  if (c.kind == "annulus" && !(c.gammas.front() > 0.0)) throw ConfigError("annulus needs gamma > 0");

  if (j.contains("options")) {
    if (!j["options"].is_object()) throw ConfigError("options must be an object");
    c.options = j["options"];
  }
  c.output = j.value("output", "");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw ConfigError("seed must be an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.threads = j.value("threads", 1);
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (j.contains("assert")) {
    if (!j["assert"].is_array()) throw ConfigError("assert must be an array");
    c.assertions = j["assert"];
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::vector<double> seeded_uniforms(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(count);
  for (auto& u : out) u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return out;
}

Boundary build_boundary(const RunConfig& config) {
  if (config.mesh) return read_boundary_file(*config.mesh);
  if (!config.shape) throw ConfigError("no shape configured");
  ShapeSpec spec = *config.shape;
  double target = 0.0;
  if (config.perturbation) {
    const auto* ball = std::get_if<Ball>(&spec.shape);
    const auto* pert = std::get_if<PerturbedBall>(&spec.shape);
    PerturbedBall pb;
    if (ball) {
      pb.center = ball->center;
      pb.radius = ball->radius;
    } else if (pert) {
      pb = *pert;
    } else {
      throw ConfigError("perturbation applies to ball or perturbed_ball shapes");
    }
    const auto& ps = *config.perturbation;
    const auto u = seeded_uniforms(config.seed, ps.modes.size());
    for (std::size_t i = 0; i < ps.modes.size(); ++i)
      pb.amplitudes[ps.modes[i]] += ps.amplitude * (2.0 * u[i] - 1.0);
    target = unit_ball_volume(spec.dimension) * std::pow(pb.radius, spec.dimension);
    spec.shape = pb;
  }
  Boundary b = tessellate(spec);
  if (config.perturbation && config.perturbation->volume_normalize)
    b = b.scaled(std::pow(target / volume(b), 1.0 / spec.dimension), centroid(b));
  return b;
}

}  // namespace gamow::cli
