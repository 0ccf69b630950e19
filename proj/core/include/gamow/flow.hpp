#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gamow/boundary.hpp"
#include "gamow/energy.hpp"
#include "gamow/potential.hpp"

namespace gamow {

struct FlowOptions {
  /// Fixed step size; 0 selects min(step_factor h_min^2, speed_factor h / max|rho|).
  double tau = 0.0;
  double step_factor = 0.25;
  double speed_factor = 0.2;
  int max_steps = 2000;
  int max_halvings = 8;
  /// Accepted steps may raise J by at most energy_slack * |J|.
  double energy_slack = 1e-9;
  /// Convergence: residual_linf / |lambda| <= tolerance.
  double tolerance = 1e-2;
  /// Remesh when the worst element quality drops below this or the
  /// max/min edge ratio exceeds edge_spread.
  double remesh_quality = 0.4;
  double edge_spread = 4.0;
  bool remesh = true;
  /// After remeshing, a worst quality below this ends the run.
  double collapse_quality = 0.05;
  QuadratureOptions quadrature;
  /// Called after every accepted step.
  std::function<void(int step, const Boundary&)> on_step;

  void validate() const;
};

struct FlowRecord {
  int step = 0;
  double energy = 0.0;
  double perimeter = 0.0;
  double nonlocal = 0.0;
  double lambda = 0.0;
  double residual_l2 = 0.0;
  double residual_linf = 0.0;
  double volume_drift = 0.0;   // relative, before the rescale
  double volume_error = 0.0;   // relative, after the rescale
  double min_quality = 0.0;
  double tau = 0.0;
  bool remeshed = false;
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  double target_volume = 0.0;
};

struct StepResult {
  Boundary boundary;
  double tau = 0.0;
  int halvings = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double volume_drift = 0.0;
  double max_displacement = 0.0;
  /// Report at the new boundary (v and NL reused by the next step).
  EnergyReport report;
};

/// One descent step x -= tau rho nu followed by the exact volume rescale about
/// the centroid. Halves tau until J does not increase beyond energy_slack;
/// throws NumericalError when max_halvings is exhausted.
StepResult step(const Boundary& b, double gamma, const FlowOptions& opts = {});
StepResult step(const Boundary& b, const EnergyReport& current, double target_volume,
                const FlowOptions& opts);

enum class FlowStatus { converged, max_steps, stalled, quality_collapse };
std::string to_string(FlowStatus s);

struct CriticalResult {
  Boundary boundary;
  FlowTrace trace;
  bool converged = false;
  FlowStatus status = FlowStatus::max_steps;
  std::string message;
  int failed_step = -1;
  EnergyReport report;
  /// Attached on convergence for n = 3.
  std::optional<double> identity_residual;
  std::optional<ScalingDerivative> scaling;
  std::optional<LambdaBound> lambda_bound;
};

CriticalResult find_critical(const Boundary& start, double gamma, const FlowOptions& opts = {});

/// Center at the volume centroid, radius from the enclosed volume.
struct BestFitBall {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};
BestFitBall best_fit_ball(const Boundary& b);
/// max over vertices of | |x - c| - r |.
double distance_to_ball(const Boundary& b, const BestFitBall& ball);

struct RemeshOptions {
  /// Target edge length; 0 uses the current mean edge length.
  double target_edge = 0.0;
  int iterations = 3;
  int smoothing_passes = 3;
};

struct RemeshResult {
  Boundary boundary;
  bool changed = false;
  std::string warning;  // non-empty when the original was returned
};

/// n = 3: edge split, collapse and valence-driven flips with tangential
/// smoothing; n = 2: arc-length equidistribution. Volume is restored exactly.
RemeshResult remesh(const Boundary& b, const RemeshOptions& opts = {});

/// Critical annulus B_R \ B_rho in R^3 for the radial problem.
struct AnnulusResult {
  bool exists = false;
  double outer = 0.0;
  double inner = 0.0;
  double lambda = 0.0;
  double residual = 0.0;  // |(H + 2 gamma v)(R) - (H + 2 gamma v)(rho)|
  int roots_found = 0;
  std::string message;
};

/// Radial potential of B_R \ B_rho (unit kernel constant 1/(4 pi)) at radius r.
double annulus_potential(double outer, double inner, double r);

/// Solves H + 2 gamma v = lambda on both spheres at |E| = target_volume by a
/// scan over the inner-radius fraction and bisection. Returns the root with
/// the smallest hole; nonexistence is a result, not an error.
AnnulusResult annulus_critical(double gamma, double target_volume);

}  // namespace gamow
