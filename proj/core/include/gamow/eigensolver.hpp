#pragma once

#include "gamow/common.hpp"

namespace gamow {

/// Lowest eigenpairs of a dense symmetric matrix, ascending.
struct EigenPairs {
  VectorX values;
  MatrixX vectors;  // orthonormal columns
  int iterations = 0;  // total bisection + inverse-iteration steps
};

/// Householder tridiagonalization, Sturm-sequence bisection for the k lowest
/// eigenvalues, inverse iteration on the tridiagonal matrix with
/// reorthogonalization inside clusters, and back-transformation.
/// Only the lower triangle of `a` is read. Deterministic and single-threaded.
/// Throws NumericalError when bisection or inverse iteration fails to converge.
EigenPairs symmetric_lowest(const MatrixX& a, int k);

/// Symmetric tridiagonal matrix: diagonal d (size m) and off-diagonal e (size m - 1).
struct Tridiagonal {
  VectorX diagonal;
  VectorX offdiagonal;
};

/// Number of eigenvalues of t strictly below x.
int sturm_count(const Tridiagonal& t, double x);

/// k lowest eigenvalues of t by bisection.
VectorX tridiagonal_lowest(const Tridiagonal& t, int k, int* iterations = nullptr);

}  // namespace gamow
