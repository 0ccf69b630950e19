#pragma once

#include "gamow/boundary.hpp"
#include "gamow/potential.hpp"

namespace gamow {

/// Energy, multiplier and Euler-Lagrange residual for one (boundary, gamma) pair.
struct EnergyReport {
  int dimension = 3;
  double gamma = 0.0;
  double perimeter = 0.0;  // P
  double nonlocal = 0.0;   // NL
  double energy = 0.0;     // J = P + gamma NL
  double volume = 0.0;
  /// Area average of H + 2 gamma v; the multiplier of the volume constraint.
  double lambda = 0.0;
  VectorX potential;  // v_E per vertex
  VectorX residual;   // H + 2 gamma v - lambda per vertex, zero area-weighted mean
  double residual_l2 = 0.0;    // sqrt(sum A_i r_i^2)
  double residual_linf = 0.0;  // max |r_i|
  /// |lambda - (n - 1) P / (n |E|)|
  double lambda_bound_gap = 0.0;

  /// L-infinity residual relative to |lambda|; "critical" means <= 1e-2.
  double relative_residual() const;
};

EnergyReport evaluate(const Boundary& b, double gamma, const QuadratureOptions& opts = {});

/// Builds the report from precomputed fields (used by the flow, which already
/// holds v and NL for the current iterate).
EnergyReport assemble_report(const Boundary& b, double gamma, const VectorX& potential,
                             double nonlocal);

struct ScalingDerivative {
  double formula = 0.0;            // (n - 1) P + (n + 2) gamma NL
  double finite_difference = 0.0;  // central difference of J((1 + t) E) at t = 0
  double step = 0.0;

  double relative_gap() const;
};

/// Compares the dilation derivative of J with its closed form. n >= 3 only:
/// the log kernel in n = 2 does not scale homogeneously.
ScalingDerivative scaling_derivative(const Boundary& b, double gamma, double step = 1e-4,
                                     const QuadratureOptions& opts = {});

/// n lambda |E| - [(n - 1) P + (n + 2) gamma NL]. Vanishes at critical sets.
double lagrange_identity_residual(const EnergyReport& report);
double lagrange_identity_residual(const Boundary& b, double gamma,
                                  const QuadratureOptions& opts = {});

struct LambdaBound {
  double gap = 0.0;    // |lambda - (n - 1) P / (n |E|)|
  double ratio = 0.0;  // gap / gamma (infinite when gamma = 0 and gap > 0)
};

LambdaBound lambda_bound_gap(const EnergyReport& report);

}  // namespace gamow
