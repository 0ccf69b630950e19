#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gamow/diagnostics.hpp"
#include "gamow/energy.hpp"
#include "gamow/flow.hpp"
#include "gamow/measures.hpp"
#include "gamow/parallel.hpp"
#include "gamow/stability.hpp"
#include "gamow_cli.hpp"
#include "output.hpp"

#ifndef GAMOW_VERSION
#define GAMOW_VERSION "0.0.0"
#endif

namespace gamow::cli {

namespace {

template <class T>
T opt(const json& options, const char* key, T fallback) {
  if (!options.contains(key)) return fallback;
  try {
    return options[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("option '") + key + "' has the wrong type");
  }
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json energy_json(const EnergyReport& r) {
  json j{{"dimension", r.dimension},
         {"gamma", r.gamma},
         {"P", r.perimeter},
         {"NL", r.nonlocal},
         {"J", r.energy},
         {"volume", r.volume},
         {"lambda", r.lambda},
         {"res_l2", r.residual_l2},
         {"res_linf", r.residual_linf},
         {"relative_residual", nullable(r.relative_residual())},
         {"lambda_bound_gap", r.lambda_bound_gap}};
  if (r.dimension == 3) j["identity_residual"] = lagrange_identity_residual(r);
  return j;
}

std::vector<std::string> energy_row(const EnergyReport& r) {
  return {format_double(r.gamma),        format_double(r.perimeter),
          format_double(r.nonlocal),     format_double(r.energy),
          format_double(r.lambda),       format_double(r.residual_l2),
          format_double(r.residual_linf),
          r.dimension == 3 ? format_double(lagrange_identity_residual(r)) : std::string()};
}

const std::vector<std::string> energy_header{"gamma",  "P",      "NL",       "J",
                                             "lambda", "res_l2", "res_linf", "identity_residual"};

QuadratureOptions quadrature_from(const json& o, int threads) {
  QuadratureOptions q;
  q.near_factor = opt(o, "near_factor", q.near_factor);
  q.mid_factor = opt(o, "mid_factor", q.mid_factor);
  q.threads = threads;
  return q;
}

FlowOptions flow_from(const json& o, int threads) {
  FlowOptions f;
  f.tau = opt(o, "tau", f.tau);
  f.step_factor = opt(o, "step_factor", f.step_factor);
  f.speed_factor = opt(o, "speed_factor", f.speed_factor);
  f.max_steps = opt(o, "max_steps", f.max_steps);
  f.tolerance = opt(o, "tolerance", f.tolerance);
  f.remesh = opt(o, "remesh", f.remesh);
  f.remesh_quality = opt(o, "remesh_quality", f.remesh_quality);
  f.edge_spread = opt(o, "edge_spread", f.edge_spread);
  f.quadrature = quadrature_from(o, threads);
  try {
    f.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return f;
}

std::string mesh_name(const std::string& stem, int dimension) {
  return stem + (dimension == 3 ? ".off" : ".csv");
}

struct Context {
  const RunConfig& config;
  const RunFlags& flags;
  OutputDir& out;
  int threads;
};

json run_energy(Context& ctx) {
  const Boundary b = build_boundary(ctx.config);
  const auto q = quadrature_from(ctx.config.options, ctx.threads);
  json reports = json::array();
  std::vector<std::vector<std::string>> rows;
  // v and NL do not depend on gamma.
  const VectorX v = potential_on_vertices(b, q);
  const double nl = nonlocal_energy(b, q);
  for (double g : ctx.config.gammas) {
    const EnergyReport r = assemble_report(b, g, v, nl);
    reports.push_back(energy_json(r));
    rows.push_back(energy_row(r));
  }
  json result{{"kind", "energy"}, {"vertices", b.vertex_count()}, {"reports", reports}};
  if (b.dimension() == 3 && ctx.config.options.value("scaling", false)) {
    json s = json::array();
    for (double g : ctx.config.gammas) {
      const auto d = scaling_derivative(b, g, 1e-4, q);
      s.push_back({{"gamma", g},
                   {"formula", d.formula},
                   {"finite_difference", d.finite_difference},
                   {"relative_gap", d.relative_gap()}});
    }
    result["scaling"] = s;
  }
  ctx.out.write_json("energy.json", result);
  ctx.out.write_csv("energy.csv", energy_header, rows);
  return result;
}

json spectrum_json(const SpectrumReport& r) {
  json values = json::array();
  for (Eigen::Index i = 0; i < r.values.size(); ++i) values.push_back(r.values(i));
  return {{"mu", values},
          {"verdict", to_string(r.verdict)},
          {"tolerance", r.tolerance},
          {"scale", r.scale},
          {"null_band", r.null_band},
          {"near_zero", r.near_zero},
          {"iterations", r.iterations}};
}

int spectrum_k(const json& o, std::size_t vertices) {
  const int k = opt(o, "k", 16);
  if (k < 1) throw ConfigError("k must be >= 1");
  return std::min<int>(k, static_cast<int>(vertices) - 1);
}

json run_spectrum(Context& ctx) {
  const Boundary b = build_boundary(ctx.config);
  StabilityOptions so;
  so.kernel.quadrature = quadrature_from(ctx.config.options, ctx.threads);
  so.kernel.max_vertices = opt<std::size_t>(ctx.config.options, "max_vertices", 8000);
  const double g = ctx.config.gammas.front();
  const SecondVariation sv = assemble(b, g, so);
  SpectrumOptions sp;
  sp.tolerance = opt(ctx.config.options, "tolerance", sp.tolerance);
  const SpectrumReport r = spectrum(sv, spectrum_k(ctx.config.options, b.vertex_count()), sp);
  json result = spectrum_json(r);
  result["kind"] = "spectrum";
  result["gamma"] = g;
  result["vertices"] = b.vertex_count();
  if (b.component_count() >= 2) {
    const auto t = two_component_test(b, g, so.kernel.quadrature);
    result["two_component_test"] = {{"value", t.value},
                                    {"alpha", t.alpha},
                                    {"curvature_term", t.curvature_term},
                                    {"potential_term", t.potential_term},
                                    {"kernel_term", t.kernel_term}};
  }
  ctx.out.write_json("spectrum.json", result);
  if (ctx.config.options.value("dump_eigenfunctions", false)) {
    std::vector<std::string> header{"vertex", "x", "y", "z"};
    for (Eigen::Index j = 0; j < r.functions.cols(); ++j)
      header.push_back("phi_" + std::to_string(j + 1));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < b.vertex_count(); ++i) {
      std::vector<std::string> row{std::to_string(i)};
      for (int c = 0; c < 3; ++c) row.push_back(format_double(b.vertex(i)[c]));
      for (Eigen::Index j = 0; j < r.functions.cols(); ++j)
        row.push_back(format_double(r.functions(static_cast<Eigen::Index>(i), j)));
      rows.push_back(std::move(row));
    }
    ctx.out.write_csv("eigenfunctions.csv", header, rows);
  }
  if (ctx.flags.export_matrices) {
    ctx.out.write_matrix_csv("matrices/stiffness.csv", MatrixX(sv.stiffness));
    ctx.out.write_matrix_csv("matrices/kernel.csv", sv.kernel);
    ctx.out.write_matrix_csv("matrices/mass.csv", sv.mass);
    ctx.out.write_matrix_csv("matrices/quadratic_form.csv", sv.matrix());
  }
  return result;
}

json flow_json(const CriticalResult& r) {
  json j{{"status", to_string(r.status)},
         {"converged", r.converged},
         {"message", r.message},
         {"steps", r.trace.records.empty() ? 0 : r.trace.records.back().step},
         {"final", energy_json(r.report)}};
  if (r.failed_step >= 0) j["failed_step"] = r.failed_step;
  if (r.identity_residual) j["identity_residual"] = *r.identity_residual;
  if (r.lambda_bound) j["lambda_bound"] = {{"gap", r.lambda_bound->gap}, {"ratio", nullable(r.lambda_bound->ratio)}};
  if (r.scaling)
    j["scaling"] = {{"formula", r.scaling->formula},
                    {"finite_difference", r.scaling->finite_difference},
                    {"relative_gap", r.scaling->relative_gap()}};
  return j;
}

json run_flow(Context& ctx) {
  const Boundary b = build_boundary(ctx.config);
  FlowOptions fo = flow_from(ctx.config.options, ctx.threads);
  if (ctx.flags.dump_mesh_every > 0) {
    const int every = ctx.flags.dump_mesh_every;
    fo.on_step = [&ctx, every](int k, const Boundary& m) {
      if (k % every != 0) return;
      std::ostringstream name;
      name << "meshes/step_" << std::setw(5) << std::setfill('0') << k;
      ctx.out.write_boundary(mesh_name(name.str(), m.dimension()), m);
    };
  }
  const double g = ctx.config.gammas.front();
  const CriticalResult r = find_critical(b, g, fo);
  json result = flow_json(r);
  result["kind"] = "flow";
  result["gamma"] = g;
  const auto census = shape_census(r.boundary);
  const auto ball = best_fit_ball(r.boundary);
  result["asphericity"] = census.asphericity;
  result["willmore"] = census.willmore;
  result["hausdorff_to_ball"] = distance_to_ball(r.boundary, ball);

  std::vector<std::vector<std::string>> rows;
  for (const auto& x : r.trace.records)
    rows.push_back({std::to_string(x.step), format_double(x.energy), format_double(x.perimeter),
                    format_double(x.nonlocal), format_double(x.lambda),
                    format_double(x.residual_l2), format_double(x.residual_linf),
                    format_double(x.volume_drift), format_double(x.volume_error),
                    format_double(x.min_quality), format_double(x.tau),
                    x.remeshed ? "1" : "0"});
  ctx.out.write_csv("flow_trace.csv",
                    {"step", "J", "P", "NL", "lambda", "res_l2", "res_linf", "volume_drift",
                     "volume_error", "min_quality", "tau", "remeshed"},
                    rows);
  ctx.out.write_boundary(mesh_name("final", r.boundary.dimension()), r.boundary);
  ctx.out.write_json("flow.json", result);
  if (r.status == FlowStatus::stalled || r.status == FlowStatus::quality_collapse)
    throw NumericalError("flow " + to_string(r.status) + ": " + r.message, r.failed_step);
  return result;
}

json run_diagnose(Context& ctx) {
  const Boundary b = build_boundary(ctx.config);
  const json& o = ctx.config.options;
  DiagnosticsOptions d;
  d.probe_vertices = opt(o, "probe_vertices", std::vector<int>{});
  d.probe_radius = opt(o, "probe_radius", 0.0);
  d.monotonicity_radii = opt(o, "monotonicity_radii", std::vector<double>{});
  const DiagnosticsReport r = diagnose(b, d);

  json comps = json::array();
  for (const auto& c : r.census.per_component)
    comps.push_back({{"area", c.area},
                     {"willmore", c.willmore},
                     {"deficit", c.deficit},
                     {"euler_characteristic", c.euler_characteristic}});
  json probes = json::array();
  for (const auto& p : r.excess)
    probes.push_back({{"vertex", p.vertex}, {"radius", p.radius}, {"excess", p.value}});
  json result{{"kind", "diagnose"},
              {"dimension", r.dimension},
              {"diameter", r.diameter},
              {"topping", {{"integral", r.topping.integral}, {"pass", r.topping.pass}}},
              {"willmore", r.census.willmore},
              {"deficit", r.census.deficit},
              {"half_mean_square", r.census.half_mean_square},
              {"asphericity", r.census.asphericity},
              {"components", r.census.components},
              {"euler_characteristic", r.census.euler_characteristic},
              {"per_component", comps},
              {"excess", probes},
              {"monotonicity_pass", r.monotonicity_pass}};

  // Profiles for the first probe.
  const double c0 = b.curvature().mean.cwiseAbs().maxCoeff();
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : r.excess) {
    std::vector<double> radii = d.monotonicity_radii;
    if (radii.empty())
      for (double f : {1.0, 1.5, 2.0, 3.0}) radii.push_back(f * p.radius);
    const auto prof = monotonicity_profile(b, b.vertex(p.vertex), c0, radii);
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
      rows.push_back({std::to_string(p.vertex), format_double(prof.radii[i]),
                      format_double(prof.values[i])});
  }
  ctx.out.write_json("diagnostics.json", result);
  ctx.out.write_csv("monotonicity.csv", {"vertex", "radius", "value"}, rows);
  return result;
}

json run_annulus(Context& ctx) {
  const json& o = ctx.config.options;
  const double g = ctx.config.gammas.front();
  const double vol = opt(o, "volume", 4.0 * pi / 3.0);
  const AnnulusResult a = annulus_critical(g, vol);
  json result{{"kind", "annulus"},  {"gamma", g},          {"volume", vol},
              {"exists", a.exists}, {"outer", a.outer},    {"inner", a.inner},
              {"lambda", a.lambda}, {"residual", a.residual}, {"roots_found", a.roots_found},
              {"message", a.message}};
  const int res = opt(o, "cross_check_resolution", 0);
  if (a.exists && res > 0) {
    ShapeSpec spec{3, Annulus{Vec3::Zero(), a.outer, a.inner}, res};
    const Boundary b = tessellate(spec);
    const EnergyReport r = evaluate(b, g, quadrature_from(o, ctx.threads));
    result["cross_check"] = energy_json(r);
  }
  ctx.out.write_json("annulus.json", result);
  return result;
}

json run_ball_oracle(Context& ctx) {
  const json& o = ctx.config.options;
  const int n = ctx.config.shape ? ctx.config.shape->dimension : opt(o, "dimension", 3);
  const int max_mode = opt(o, "max_mode", 5);
  if (max_mode < 1) throw ConfigError("max_mode must be >= 1");
  json tables = json::array();
  std::vector<std::vector<std::string>> rows;
  for (double g : ctx.config.gammas) {
    json mu = json::object();
    json modes = json::array();
    for (int l = 1; l <= max_mode; ++l) {
      const double v = ball_mode_eigenvalue(n, l, g);
      const int mult = n == 3 ? 2 * l + 1 : 2;
      mu[std::to_string(l)] = v;
      modes.push_back({{"mode", l}, {"value", v}, {"multiplicity", mult}});
      rows.push_back({format_double(g), std::to_string(l), format_double(v), std::to_string(mult)});
    }
    tables.push_back({{"gamma", g}, {"mu", mu}, {"modes", modes}});
  }
  json result{{"kind", "ball-oracle"}, {"dimension", n}, {"tables", tables}};
  if (tables.size() == 1) {
    result["gamma"] = tables[0]["gamma"];
    result["mu"] = tables[0]["mu"];
  }
  ctx.out.write_json("ball_oracle.json", result);
  ctx.out.write_csv("ball_oracle.csv", {"gamma", "mode", "value", "multiplicity"}, rows);
  return result;
}

json run_sweep(Context& ctx) {
  const json& o = ctx.config.options;
  const std::string mode = opt<std::string>(o, "mode", "spectrum");
  const Boundary b = build_boundary(ctx.config);
  const auto& gammas = ctx.config.gammas;
  const std::size_t count = gammas.size();
  std::vector<std::vector<std::string>> rows(count);
  json items = json::array();
  std::vector<json> item(count);
  std::vector<std::string> header;

  if (mode == "spectrum") {
    StabilityOptions so;
    so.kernel.quadrature = quadrature_from(o, ctx.threads);
    const SecondVariation base = assemble(b, 0.0, so);
    const int k = spectrum_k(o, b.vertex_count());
    SpectrumOptions sp;
    sp.tolerance = opt(o, "tolerance", sp.tolerance);
    header = {"gamma"};
    for (int j = 1; j <= k; ++j) header.push_back("mu_" + std::to_string(j));
    header.push_back("verdict");
    header.push_back("error");
    parallel_for(count, ctx.threads, [&](std::size_t i) {
      std::vector<std::string> row{format_double(gammas[i])};
      try {
        const auto r = spectrum(base.with_gamma(gammas[i]), k, sp);
        for (int j = 0; j < k; ++j) row.push_back(format_double(r.values(j)));
        row.push_back(to_string(r.verdict));
        row.push_back("");
        item[i] = spectrum_json(r);
      } catch (const Error& e) {
        row.resize(k + 1);
        row.push_back("");
        row.push_back(e.what());
        item[i] = {{"error", e.what()}};
      }
      item[i]["gamma"] = gammas[i];
      rows[i] = std::move(row);
    });
  } else if (mode == "flow") {
    const FlowOptions base = flow_from(o, 1);
    header = {"gamma", "converged", "status", "steps", "asphericity", "relative_residual", "error"};
    parallel_for(count, ctx.threads, [&](std::size_t i) {
      std::vector<std::string> row{format_double(gammas[i])};
      try {
        const auto r = find_critical(b, gammas[i], base);
        const double asph = asphericity(r.boundary);
        const int steps = r.trace.records.back().step;
        row.insert(row.end(), {r.converged ? "1" : "0", to_string(r.status), std::to_string(steps),
                               format_double(asph), format_double(r.report.relative_residual()),
                               ""});
        item[i] = flow_json(r);
        item[i]["asphericity"] = asph;
      } catch (const Error& e) {
        row.insert(row.end(), {"0", "error", "", "", "", e.what()});
        item[i] = {{"error", e.what()}};
      }
      item[i]["gamma"] = gammas[i];
      rows[i] = std::move(row);
    });
  } else {
    throw ConfigError("sweep mode must be 'spectrum' or 'flow'");
  }
  for (auto& it : item) items.push_back(std::move(it));
  json result{{"kind", "sweep"}, {"mode", mode}, {"items", items}};
  ctx.out.write_json("sweep.json", result);
  ctx.out.write_csv("sweep.csv", header, rows);
  return result;
}

}  // namespace

std::filesystem::path resolve_output_dir(const RunConfig& config, const RunFlags& flags,
                                         const std::string& name) {
  if (!flags.out.empty()) return flags.out;
  if (!config.output.empty()) return config.output;
  if (const char* root = std::getenv("GAMOW_OUT"); root && *root)
    return std::filesystem::path(root) / name;
  return std::filesystem::path("gamow_out") / name;
}

std::vector<std::string> check_assertions(const json& assertions, const json& result) {
  std::vector<std::string> failures;
  for (const auto& a : assertions) {
    const std::string ptr = a.value("pointer", "");
    json value;
    try {
      value = result.at(json::json_pointer(ptr));
    } catch (const json::exception&) {
      failures.push_back(ptr + ": missing");
      continue;
    }
    if (a.contains("equals") && value != a["equals"])
      failures.push_back(ptr + ": " + value.dump() + " != " + a["equals"].dump());
    if (a.contains("min") || a.contains("max")) {
      if (!value.is_number()) {
        failures.push_back(ptr + ": not a number");
        continue;
      }
      const double v = value.get<double>();
      if (a.contains("min") && !(v >= a["min"].get<double>()))
        failures.push_back(ptr + ": " + format_double(v) + " < " + a["min"].dump());
      if (a.contains("max") && !(v <= a["max"].get<double>()))
        failures.push_back(ptr + ": " + format_double(v) + " > " + a["max"].dump());
    }
  }
  return failures;
}

RunOutcome run(const RunConfig& config, const RunFlags& flags,
               const std::filesystem::path& output_dir) {
  RunOutcome outcome;
  outcome.output_dir = output_dir;
  const int threads = flags.threads > 0 ? flags.threads : config.threads;
  set_default_threads(threads);
  const std::string started = iso_timestamp();

  std::optional<OutputDir> out;
  try {
    out.emplace(output_dir);
  } catch (const Error& e) {
    outcome.exit_code = exit_config;
    outcome.message = e.what();
    return outcome;
  }
  Context ctx{config, flags, *out, threads};
  try {
    if (config.kind == "energy") outcome.result = run_energy(ctx);
    else if (config.kind == "spectrum") outcome.result = run_spectrum(ctx);
    else if (config.kind == "flow") outcome.result = run_flow(ctx);
    else if (config.kind == "diagnose") outcome.result = run_diagnose(ctx);
    else if (config.kind == "annulus") outcome.result = run_annulus(ctx);
    else if (config.kind == "ball-oracle") outcome.result = run_ball_oracle(ctx);
    else if (config.kind == "sweep") outcome.result = run_sweep(ctx);
    else throw ConfigError("unknown experiment kind '" + config.kind + "'");
    const auto failures = check_assertions(config.assertions, outcome.result);
    if (!failures.empty()) {
      outcome.exit_code = exit_assertion;
      for (const auto& f : failures) outcome.message += (outcome.message.empty() ? "" : "; ") + f;
    }
  } catch (const InvalidInput& e) {  // includes ConfigError
    outcome.exit_code = exit_config;
    outcome.message = e.what();
  } catch (const Unsupported& e) {
    outcome.exit_code = exit_config;
    outcome.message = e.what();
  } catch (const Error& e) {
    outcome.exit_code = exit_numerical;
    outcome.message = e.what();
  } catch (const json::exception& e) {
    outcome.exit_code = exit_config;
    outcome.message = e.what();
  }

  for (const auto& name : out->files()) {
    const auto path = output_dir / name;
    outcome.artifacts.push_back({name, sha256_file(path), std::filesystem::file_size(path)});
  }
  json artifacts = json::array();
  for (const auto& a : outcome.artifacts)
    artifacts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  json manifest{{"tool", "gamow"},
                {"version", GAMOW_VERSION},
                {"config", config.raw},
                {"threads", threads},
                {"started", started},
                {"finished", iso_timestamp()},
                {"exit_code", outcome.exit_code},
                {"message", outcome.message},
                {"artifacts", artifacts}};
  std::ofstream(output_dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
  return outcome;
}

}  // namespace gamow::cli
