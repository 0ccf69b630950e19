#pragma once

#include "gamow/boundary.hpp"

namespace gamow {

/// Newtonian kernel G(x, y) = c_n |x - y|^{2-n} (n >= 3) or (1/2pi) log(1/|x - y|) (n = 2).
struct KernelParams {
  int dimension = 3;
  /// 1 / (n (n - 2) omega_n) for n >= 3, 1 / (2 pi) for n = 2.
  double constant = 0.0;

  static KernelParams for_dimension(int n);
  double operator()(double r) const;
};

/// Controls the near/far classification of element interactions. An element
/// is "near" a point when their distance is below near_factor element
/// diameters; near interactions use graded Duffy quadrature.
struct QuadratureOptions {
  double near_factor = 1.5;
  double mid_factor = 4.0;
  int threads = 0;
};

/// v_E(x) = integral over E of G(x, y) dy, via the boundary reduction
///   n >= 3:  (c_n / 2) int_{dE} |x - y|^{2-n} (y - x).nu dsigma
///   n = 2:   (1 / 2pi) [ (1/2) int_{dE} log(1/|x - y|) (y - x).nu dsigma + |E| / 2 ].
/// Valid for x anywhere, including on the boundary.
double potential_at(const Boundary& b, const Vec3& x, const QuadratureOptions& opts = {});

/// grad v_E(x) = - int_{dE} G(x, y) nu(y) dsigma(y).
Vec3 potential_gradient_at(const Boundary& b, const Vec3& x, const QuadratureOptions& opts = {});

struct PotentialField {
  VectorX value;              // v_E at each vertex
  VectorX normal_derivative;  // d_nu v_E at each vertex (vertex normal)
};

VectorX potential_on_vertices(const Boundary& b, const QuadratureOptions& opts = {});
VectorX normal_derivative(const Boundary& b, const QuadratureOptions& opts = {});
PotentialField potential_field(const Boundary& b, const QuadratureOptions& opts = {});

/// NL(E) = int_E int_E G(x, y) dx dy by a double boundary reduction with a
/// continuous kernel:
///   n = 3:  -(c_3 / 2) int int |x - y| nu(x).nu(y)
///   n = 2:  (1 / 2pi) [ int int (|x - y|^2 / 4) log|x - y| nu(x).nu(y) + |E|^2 ].
double nonlocal_energy(const Boundary& b, const QuadratureOptions& opts = {});

struct KernelMatrixOptions {
  QuadratureOptions quadrature;
  /// Dense assembly is refused above this vertex count.
  std::size_t max_vertices = 8000;
};

/// Galerkin kernel matrix K_ij = int int phi_i(x) phi_j(y) G(x, y) dsigma dsigma
/// for nodal hat functions. Exactly symmetric.
MatrixX kernel_matrix(const Boundary& b, const KernelMatrixOptions& opts = {});

/// Per-vertex  int_{dE} |x_i - y|^{2-n} dsigma(y)  (equals P(E) for n = 2).
VectorX kernel_row_integrals(const Boundary& b, const QuadratureOptions& opts = {});

/// I[a][b] = int_{Gamma_a} int_{Gamma_b} G(x, y) over pairs of connected components.
MatrixX component_kernel_integrals(const Boundary& b, const QuadratureOptions& opts = {});

}  // namespace gamow
