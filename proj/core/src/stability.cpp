#include "gamow/stability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gamow/eigensolver.hpp"

namespace gamow {

VectorX SecondVariation::potential_mass() const {
  return 2.0 * gamma * mass.cwiseProduct(normal_derivative);
}

MatrixX SecondVariation::matrix() const {
  MatrixX q = MatrixX(stiffness);
  if (gamma != 0.0) q += 2.0 * gamma * kernel;
  q.diagonal() += potential_mass() - curvature_mass;
  // Exact symmetry regardless of summation order.
  return 0.5 * (q + q.transpose());
}

SecondVariation SecondVariation::with_gamma(double g) const {
  if (!(g >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  SecondVariation out = *this;
  out.gamma = g;
  return out;
}

SecondVariation assemble(const Boundary& b, double gamma, const StabilityOptions& opts) {
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  const auto ops = laplace_operators(b);
  SecondVariation sv;
  sv.dimension = b.dimension();
  sv.gamma = gamma;
  sv.stiffness = ops.stiffness;
  sv.mass = ops.mass;
  sv.constraint = ops.mass;
  sv.curvature_mass = ops.mass.cwiseProduct(b.curvature().second_form);
  sv.normal_derivative = normal_derivative(b, opts.kernel.quadrature);
  sv.kernel = kernel_matrix(b, opts.kernel);
  return sv;
}

double quadratic_form(const SecondVariation& sv, const VectorX& phi) {
  if (phi.size() != sv.mass.size()) throw InvalidInput("vertex function has the wrong length");
  const double scale = sv.constraint.cwiseProduct(phi).cwiseAbs().sum();
  const double c = sv.constraint.dot(phi);
  if (std::abs(c) > 1e-8 * std::max(scale, 1e-300))
    throw InvalidInput("vertex function violates the zero-average constraint");
  double q = phi.dot(sv.stiffness * phi);
  q += phi.dot((sv.potential_mass() - sv.curvature_mass).cwiseProduct(phi));
  if (sv.gamma != 0.0) q += 2.0 * sv.gamma * phi.dot(sv.kernel * phi);
  return q;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::marginal: return "marginal";
  }
  return "unknown";
}

namespace {

// A = M^{-1/2} Q M^{-1/2}
MatrixX scaled_operator(const SecondVariation& sv) {
  const VectorX s = sv.mass.cwiseSqrt().cwiseInverse();
  MatrixX a = sv.matrix();
  a = s.asDiagonal() * a * s.asDiagonal();
  return 0.5 * (a + a.transpose());
}

double median_abs_diagonal(const MatrixX& q) {
  std::vector<double> d(q.rows());
  for (Eigen::Index i = 0; i < q.rows(); ++i) d[i] = std::abs(q(i, i));
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

SpectrumReport spectrum(const SecondVariation& sv, int k, const SpectrumOptions& opts) {
  const auto m = sv.mass.size();
  if (k < 1 || k > m - 1) throw InvalidInput("spectrum: k must be in [1, vertex count - 1]");
  if (!(opts.tolerance > 0.0)) throw InvalidInput("spectrum tolerance must be positive");

  const VectorX root = sv.mass.cwiseSqrt();
  // In psi = M^{1/2} phi the constraint is u^T psi = 0 with u = M^{1/2} 1 / |.|.
  VectorX u = sv.constraint.cwiseQuotient(root);
  u.normalize();
  // Householder H = I - 2 w w^T with H u = s e_1.
  const double s = u(0) >= 0.0 ? -1.0 : 1.0;
  VectorX w = u;
  w(0) -= s;
  w.normalize();

  MatrixX a = scaled_operator(sv);
  const VectorX aw = a * w;
  const double waw = w.dot(aw);
  // H A H = A - 2 w (Aw)^T - 2 (Aw) w^T + 4 (w^T A w) w w^T
  const VectorX z = aw - waw * w;
  a.noalias() -= 2.0 * w * z.transpose();
  a.noalias() -= 2.0 * z * w.transpose();
  const MatrixX reduced = a.bottomRightCorner(m - 1, m - 1);

  const EigenPairs pairs = symmetric_lowest(reduced, k);

  SpectrumReport r;
  r.values = pairs.values;
  r.iterations = pairs.iterations;
  r.tolerance = opts.tolerance;
  r.functions.resize(m, k);
  for (int j = 0; j < k; ++j) {
    VectorX psi(m);
    psi(0) = 0.0;
    psi.tail(m - 1) = pairs.vectors.col(j);
    psi -= 2.0 * w.dot(psi) * w;
    r.functions.col(j) = psi.cwiseQuotient(root);
  }

  r.scale = median_abs_diagonal(sv.matrix());
  const double threshold = opts.tolerance * r.scale;
  r.null_band = opts.tolerance * sv.curvature_mass.sum() / sv.mass.sum();
  for (int j = 0; j < k; ++j)
    if (std::abs(r.values(j)) <= r.null_band) ++r.near_zero;
  if (r.values(0) < -threshold) r.verdict = Verdict::unstable;
  else if (r.near_zero > sv.dimension) r.verdict = Verdict::marginal;
  else r.verdict = Verdict::stable;
  return r;
}

VectorX constrained_eigenvalues(const SecondVariation& sv, const MatrixX& basis, int k) {
  const auto m = sv.mass.size();
  if (basis.rows() != m || basis.cols() != m - 1)
    throw InvalidInput("complement basis must be m x (m - 1)");
  const MatrixX a = scaled_operator(sv);
  MatrixX reduced = basis.transpose() * a * basis;
  reduced = 0.5 * (reduced + reduced.transpose());
  return symmetric_lowest(reduced, k).values;
}

double ball_mode_eigenvalue(int n, int mode, double gamma) {
  if (mode < 1) throw InvalidInput("mode 0 violates the zero-average constraint");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  const double l = mode;
  if (n == 3) return l * (l + 1.0) - 2.0 + 2.0 * gamma * (1.0 / (2.0 * l + 1.0) - 1.0 / 3.0);
  if (n == 2) return l * l - 1.0 + gamma * (1.0 / l - 1.0);
  throw Unsupported("ball modes are available for n = 2 and n = 3");
}

TwoComponentResult two_component_test(const Boundary& b, double gamma,
                                      const QuadratureOptions& opts) {
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  const int comps = b.component_count();
  if (comps < 2) throw InvalidInput("two_component_test needs at least two components");

  const auto comp = b.vertex_components();
  const VectorX& area = b.vertex_areas();
  double first = 0.0, rest = 0.0;
  for (std::size_t i = 0; i < b.vertex_count(); ++i) (comp[i] == 0 ? first : rest) += area[i];

  TwoComponentResult r;
  r.alpha = first / rest;
  VectorX level(comps);
  level.setConstant(-r.alpha);
  level(0) = 1.0;

  const VectorX& B2 = b.curvature().second_form;
  double curv = 0.0;
  for (std::size_t i = 0; i < b.vertex_count(); ++i) {
    const double phi = level(comp[i]);
    curv += area[i] * B2[i] * phi * phi;
  }
  r.curvature_term = -curv;
  if (gamma > 0.0) {
    const VectorX dv = normal_derivative(b, opts);
    double pot = 0.0;
    for (std::size_t i = 0; i < b.vertex_count(); ++i) {
      const double phi = level(comp[i]);
      pot += area[i] * dv[i] * phi * phi;
    }
    r.potential_term = 2.0 * gamma * pot;
    const MatrixX I = component_kernel_integrals(b, opts);
    r.kernel_term = 2.0 * gamma * level.dot(I * level);
  }
  r.value = r.curvature_term + r.potential_term + r.kernel_term;
  return r;
}

}  // namespace gamow
