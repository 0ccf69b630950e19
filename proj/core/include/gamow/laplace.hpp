#pragma once

#include <Eigen/SparseCore>

#include "gamow/boundary.hpp"

namespace gamow {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Weak Laplace-Beltrami stiffness S (symmetric positive semidefinite,
/// phi^T S phi = integral |D_tau phi|^2 for piecewise linear phi) and the
/// lumped mass M (diagonal, the vertex area weights).
struct LaplaceOperators {
  SparseMatrix stiffness;
  VectorX mass;

  /// Discrete Delta_tau f = -M^{-1} S f.
  VectorX laplacian(const VectorX& f) const;
};

LaplaceOperators laplace_operators(const Boundary& b);

/// Per-vertex tangential gradient of a piecewise linear field: area-weighted
/// average of the element gradients, projected on the vertex tangent plane.
std::vector<Vec3> tangential_gradient(const Boundary& b, const VectorX& f);

/// Discrete M-weighted L2 norms of the surface identities
///   r1 = |Delta_tau x + H nu|,  r2 = |Delta_tau nu + |B|^2 nu - grad_tau H|
/// together with the reference norms |H nu| and ||B|^2 nu|. Here nu is the
/// normal of a two-ring quadratic fit. n = 3 only.
struct IdentityResiduals {
  double position = 0.0;   // r1
  double normal = 0.0;     // r2
  double position_scale = 0.0;
  double normal_scale = 0.0;
};

IdentityResiduals geometric_identity_residuals(const Boundary& b);

}  // namespace gamow
