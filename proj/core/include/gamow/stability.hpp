#pragma once

#include <string>

#include "gamow/boundary.hpp"
#include "gamow/laplace.hpp"
#include "gamow/potential.hpp"

namespace gamow {

/// Discrete second variation of J at a boundary, on P1 vertex functions:
///   Q[phi] = phi^T (S - C + V + 2 gamma K) phi
/// with S the Laplace-Beltrami stiffness, C = diag(M |B|^2),
/// V = diag(M 2 gamma d_nu v) and K the Galerkin kernel matrix.
/// Admissible phi satisfy a^T phi = 0 with a = M 1.
struct SecondVariation {
  int dimension = 3;
  double gamma = 0.0;
  SparseMatrix stiffness;   // S
  VectorX curvature_mass;   // diagonal of C
  VectorX normal_derivative;  // d_nu v per vertex (gamma-free)
  MatrixX kernel;           // K (gamma-free)
  VectorX mass;             // diagonal of M
  VectorX constraint;       // a

  /// Diagonal of V = 2 gamma M d_nu v.
  VectorX potential_mass() const;
  /// Full symmetric Q.
  MatrixX matrix() const;
  /// Same geometry and kernel, different coupling.
  SecondVariation with_gamma(double gamma) const;
};

struct StabilityOptions {
  KernelMatrixOptions kernel;
};

SecondVariation assemble(const Boundary& b, double gamma, const StabilityOptions& opts = {});

/// phi^T Q phi. Throws InvalidInput when |a^T phi| > 1e-8 * sum |a_i phi_i|.
double quadratic_form(const SecondVariation& sv, const VectorX& phi);

enum class Verdict { stable, unstable, marginal };
std::string to_string(Verdict v);

struct SpectrumReport {
  VectorX values;      // mu_1 <= ... <= mu_k
  MatrixX functions;   // M-orthonormal columns satisfying a^T phi = 0
  Verdict verdict = Verdict::stable;
  double tolerance = 5e-2;
  double scale = 0.0;     // median |Q_ii|
  double null_band = 0.0; // tolerance * <|B|^2>
  int near_zero = 0;      // eigenvalues with |mu| <= null_band
  int iterations = 0;
};

struct SpectrumOptions {
  double tolerance = 5e-2;
};

/// Lowest k eigenpairs of (Q, M) on {a^T phi = 0}. The constraint is removed
/// by a Householder deflation in M^{1/2} coordinates.
///
/// Verdict: unstable when mu_1 < -tol * scale; otherwise marginal when more
/// than n eigenvalues lie within tol * <|B|^2> of zero (more null directions
/// than the n translations), stable else. <|B|^2> is the area average.
SpectrumReport spectrum(const SecondVariation& sv, int k, const SpectrumOptions& opts = {});

/// Same eigenproblem with the constraint removed through an arbitrary
/// orthonormal complement basis (columns of `basis`, size m x (m - 1), in
/// M^{1/2} coordinates). Used to check basis independence.
VectorX constrained_eigenvalues(const SecondVariation& sv, const MatrixX& basis, int k);

/// Exact second-variation eigenvalue of the unit ball for mode l:
///   n = 3:  l(l + 1) - 2 + 2 gamma (1 / (2l + 1) - 1 / 3)
///   n = 2:  l^2 - 1 + gamma (1 / l - 1)
double ball_mode_eigenvalue(int n, int mode, double gamma);

struct TwoComponentResult {
  double value = 0.0;   // Q[phi]
  double alpha = 0.0;   // phi = 1 on component 0, -alpha elsewhere
  double curvature_term = 0.0;   // -int |B|^2 phi^2
  double potential_term = 0.0;   // 2 gamma int d_nu v phi^2
  double kernel_term = 0.0;      // 2 gamma int int G phi phi
};

/// The locally constant test function: 1 on the first component, -alpha on
/// the others with alpha = P(first) / P(rest). Needs >= 2 components.
TwoComponentResult two_component_test(const Boundary& b, double gamma,
                                      const QuadratureOptions& opts = {});

}  // namespace gamow
