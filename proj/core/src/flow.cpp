#include "gamow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gamow/measures.hpp"

namespace gamow {

void FlowOptions::validate() const {
  if (!(tau >= 0.0)) throw InvalidInput("flow step size must be nonnegative (0 = automatic)");
  if (!(step_factor > 0.0 && speed_factor > 0.0)) throw InvalidInput("step factors must be positive");
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidInput("flow tolerance must be in (0, 1)");
  if (max_steps < 0 || max_halvings < 0) throw InvalidInput("step limits must be nonnegative");
  if (!(energy_slack >= 0.0)) throw InvalidInput("energy slack must be nonnegative");
}

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_steps: return "max_steps";
    case FlowStatus::stalled: return "stalled";
    case FlowStatus::quality_collapse: return "quality_collapse";
  }
  return "unknown";
}

namespace {

Boundary rescale_to(const Boundary& b, double target) {
  const double v = volume(b);
  return b.scaled(std::pow(target / v, 1.0 / b.dimension()), centroid(b));
}

double automatic_tau(const Boundary& b, const EnergyReport& r, const FlowOptions& opts) {
  if (opts.tau > 0.0) return opts.tau;
  const double h_min = b.min_edge_length();
  double tau = opts.step_factor * h_min * h_min;
  const double speed = r.residual_linf;
  if (speed > 0.0) tau = std::min(tau, opts.speed_factor * b.mean_edge_length() / speed);
  return tau;
}

}  // namespace

StepResult step(const Boundary& b, const EnergyReport& current, double target_volume,
                const FlowOptions& opts) {
  opts.validate();
  const auto normals = b.normals();
  const double gamma = current.gamma;
  double tau = automatic_tau(b, current, opts);

  for (int halving = 0; halving <= opts.max_halvings; ++halving, tau *= 0.5) {
    std::vector<Vec3> pts(b.vertex_count());
    for (std::size_t i = 0; i < pts.size(); ++i)
      pts[i] = b.vertex(i) - tau * current.residual[i] * normals[i];
    // A rejected geometry (degenerate or inverted) falls back to a smaller step.
    std::optional<Boundary> moved;
    double drift = 0.0;
    try {
      moved = b.with_vertices(std::move(pts));
      drift = (volume(*moved) - target_volume) / target_volume;
    } catch (const GeometryError&) {
      continue;
    }
    Boundary next = rescale_to(*moved, target_volume);
    const double nl = gamma == 0.0 ? 0.0 : nonlocal_energy(next, opts.quadrature);
    const double j_new = perimeter(next) + gamma * nl;
    if (j_new <= current.energy + opts.energy_slack * std::abs(current.energy)) {
      StepResult r{next, tau, halving, current.energy, j_new, drift, 0.0, {}};
      for (std::size_t i = 0; i < next.vertex_count(); ++i)
        r.max_displacement = std::max(r.max_displacement, (next.vertex(i) - b.vertex(i)).norm());
      const VectorX v =
          gamma == 0.0 ? VectorX::Zero(next.vertex_count())
                       : potential_on_vertices(next, opts.quadrature);
      r.report = assemble_report(next, gamma, v, nl);
      return r;
    }
  }
  throw NumericalError("flow stalled: energy did not decrease after " +
                           std::to_string(opts.max_halvings) + " step halvings",
                       opts.max_halvings);
}

StepResult step(const Boundary& b, double gamma, const FlowOptions& opts) {
  const EnergyReport current = gamma == 0.0
                                   ? assemble_report(b, 0.0, VectorX::Zero(b.vertex_count()), 0.0)
                                   : evaluate(b, gamma, opts.quadrature);
  return step(b, current, volume(b), opts);
}

BestFitBall best_fit_ball(const Boundary& b) {
  BestFitBall ball;
  ball.center = centroid(b);
  ball.radius = volume_equivalent_radius(b);
  return ball;
}

double distance_to_ball(const Boundary& b, const BestFitBall& ball) {
  double worst = 0.0;
  for (const auto& p : b.vertices()) worst = std::max(worst, std::abs((p - ball.center).norm() - ball.radius));
  return worst;
}

namespace {

EnergyReport report_for(const Boundary& b, double gamma, const QuadratureOptions& q) {
  if (gamma == 0.0) return assemble_report(b, 0.0, VectorX::Zero(b.vertex_count()), 0.0);
  return evaluate(b, gamma, q);
}

FlowRecord record_of(int index, const EnergyReport& r, const Boundary& b, double target,
                     double tau, double drift, bool remeshed) {
  FlowRecord rec;
  rec.step = index;
  rec.energy = r.energy;
  rec.perimeter = r.perimeter;
  rec.nonlocal = r.nonlocal;
  rec.lambda = r.lambda;
  rec.residual_l2 = r.residual_l2;
  rec.residual_linf = r.residual_linf;
  rec.volume_drift = drift;
  rec.volume_error = (r.volume - target) / target;
  rec.min_quality = min_element_quality(b);
  rec.tau = tau;
  rec.remeshed = remeshed;
  return rec;
}

bool needs_remesh(const Boundary& b, const FlowOptions& opts) {
  if (min_element_quality(b) < opts.remesh_quality) return true;
  return b.max_edge_length() > opts.edge_spread * b.min_edge_length();
}

}  // namespace

CriticalResult find_critical(const Boundary& start, double gamma, const FlowOptions& opts) {
  opts.validate();
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  CriticalResult out{start, {}, false, FlowStatus::max_steps, {}, -1, {}, {}, {}, {}};
  const double target = volume(start);
  out.trace.target_volume = target;

  Boundary b = start;
  EnergyReport report = report_for(b, gamma, opts.quadrature);
  out.trace.records.push_back(record_of(0, report, b, target, 0.0, 0.0, false));

  for (int k = 1;; ++k) {
    if (report.relative_residual() <= opts.tolerance) {
      out.converged = true;
      out.status = FlowStatus::converged;
      break;
    }
    if (k > opts.max_steps) {
      out.status = FlowStatus::max_steps;
      out.message = "step limit reached";
      break;
    }
    bool remeshed = false;
    if (opts.remesh && needs_remesh(b, opts)) {
      auto rm = remesh(b);
      if (rm.changed) {
        b = std::move(rm.boundary);
        report = report_for(b, gamma, opts.quadrature);
        remeshed = true;
      }
      if (min_element_quality(b) < opts.collapse_quality) {
        out.status = FlowStatus::quality_collapse;
        out.failed_step = k;
        out.message = "mesh quality collapsed (possible pinch) at step " + std::to_string(k);
        break;
      }
    }
    try {
      StepResult s = step(b, report, target, opts);
      b = std::move(s.boundary);
      report = std::move(s.report);
      out.trace.records.push_back(record_of(k, report, b, target, s.tau, s.volume_drift, remeshed));
    } catch (const NumericalError& e) {
      out.status = FlowStatus::stalled;
      out.failed_step = k;
      out.message = e.what();
      break;
    }
    if (opts.on_step) opts.on_step(k, b);
  }

  out.boundary = b;
  out.report = report;
  if (out.converged && b.dimension() == 3) {
    out.identity_residual = lagrange_identity_residual(report);
    out.lambda_bound = lambda_bound_gap(report);
    out.scaling = scaling_derivative(b, gamma, 1e-4, opts.quadrature);
  }
  return out;
}

}  // namespace gamow
