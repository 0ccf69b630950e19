#include "gamow/energy.hpp"

#include <cmath>
#include <limits>

#include "gamow/measures.hpp"

namespace gamow {

double EnergyReport::relative_residual() const {
  return std::abs(lambda) > 0.0 ? residual_linf / std::abs(lambda)
                                : std::numeric_limits<double>::infinity();
}

EnergyReport assemble_report(const Boundary& b, double gamma, const VectorX& potential,
                             double nonlocal) {
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  const int n = b.dimension();
  const VectorX& area = b.vertex_areas();
  const VectorX& H = b.curvature().mean;

  EnergyReport r;
  r.dimension = n;
  r.gamma = gamma;
  r.perimeter = perimeter(b);
  r.nonlocal = nonlocal;
  r.energy = r.perimeter + gamma * r.nonlocal;
  r.volume = volume(b);
  r.potential = potential;

  const VectorX first = H + 2.0 * gamma * potential;
  const double total_area = area.sum();
  r.lambda = area.dot(first) / total_area;
  r.residual = first.array() - r.lambda;
  // Remove the round-off mean so the weighted mean is zero to machine precision.
  r.residual.array() -= area.dot(r.residual) / total_area;
  r.residual_l2 = std::sqrt(area.dot(r.residual.cwiseAbs2()));
  r.residual_linf = r.residual.cwiseAbs().maxCoeff();
  r.lambda_bound_gap = std::abs(r.lambda - (n - 1) * r.perimeter / (n * r.volume));
  return r;
}

EnergyReport evaluate(const Boundary& b, double gamma, const QuadratureOptions& opts) {
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  return assemble_report(b, gamma, potential_on_vertices(b, opts), nonlocal_energy(b, opts));
}

double ScalingDerivative::relative_gap() const {
  return std::abs(formula - finite_difference) / std::max(std::abs(formula), 1e-300);
}

ScalingDerivative scaling_derivative(const Boundary& b, double gamma, double step,
                                     const QuadratureOptions& opts) {
  const int n = b.dimension();
  if (n < 3)
    throw Unsupported("scaling identity is stated for n >= 3; the n = 2 log kernel adds a "
                      "|E|^2 log term");
  if (!(step > 0.0 && step < 0.5)) throw InvalidInput("scaling step must be in (0, 0.5)");
  auto J = [&](const Boundary& s) {
    const double p = perimeter(s);
    return gamma == 0.0 ? p : p + gamma * nonlocal_energy(s, opts);
  };
  const double nl = gamma == 0.0 ? 0.0 : nonlocal_energy(b, opts);
  ScalingDerivative out;
  out.step = step;
  out.formula = (n - 1) * perimeter(b) + (n + 2) * gamma * nl;
  const double jp = J(b.scaled(1.0 + step));
  const double jm = J(b.scaled(1.0 - step));
  out.finite_difference = (jp - jm) / (2.0 * step);
  return out;
}

double lagrange_identity_residual(const EnergyReport& r) {
  const int n = r.dimension;
  if (n < 3) throw Unsupported("Lagrange identity is stated for n >= 3");
  return n * r.lambda * r.volume - ((n - 1) * r.perimeter + (n + 2) * r.gamma * r.nonlocal);
}

double lagrange_identity_residual(const Boundary& b, double gamma, const QuadratureOptions& opts) {
  return lagrange_identity_residual(evaluate(b, gamma, opts));
}

LambdaBound lambda_bound_gap(const EnergyReport& report) {
  LambdaBound out;
  out.gap = report.lambda_bound_gap;
  if (report.gamma > 0.0) out.ratio = out.gap / report.gamma;
  else out.ratio = out.gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return out;
}

}  // namespace gamow
