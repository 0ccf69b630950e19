#include "gamow/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace gamow {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Reduction {
  Tridiagonal t;
  MatrixX reflectors;  // column j holds v_j below row j + 1 (v_j(0) = 1 implicit)
  VectorX beta;
};

// A = Q T Q^T with Q = H_0 H_1 ... H_{m-3}, H_j = I - beta_j v_j v_j^T acting on rows j+1..m-1.
Reduction tridiagonalize(MatrixX a) {
  const Eigen::Index m = a.rows();
  Reduction r;
  r.beta = VectorX::Zero(std::max<Eigen::Index>(m - 2, 0));
  for (Eigen::Index j = 0; j + 2 < m; ++j) {
    const Eigen::Index len = m - j - 1;
    auto x = a.col(j).tail(len);
    const double alpha = x(0);
    const double tail2 = x.tail(len - 1).squaredNorm();
    if (tail2 == 0.0) {
      r.beta(j) = 0.0;
      continue;
    }
    const double norm = std::sqrt(alpha * alpha + tail2);
    const double diag = alpha <= 0.0 ? norm : -norm;  // new subdiagonal entry
    const double v0 = alpha - diag;
    VectorX v(len);
    v(0) = 1.0;
    v.tail(len - 1) = x.tail(len - 1) / v0;
    const double beta = -v0 / diag;
    r.beta(j) = beta;
    x(0) = diag;
    x.tail(len - 1) = v.tail(len - 1);

    auto block = a.bottomRightCorner(len, len);
    VectorX p = beta * (block.selfadjointView<Eigen::Lower>() * v);
    const VectorX w = p - (0.5 * beta * p.dot(v)) * v;
    block.selfadjointView<Eigen::Lower>().rankUpdate(v, w, -1.0);
  }
  r.t.diagonal = a.diagonal();
  r.t.offdiagonal = m > 1 ? VectorX(a.diagonal(-1)) : VectorX();
  r.reflectors = std::move(a);
  return r;
}

void back_transform(const Reduction& r, MatrixX& y) {
  const Eigen::Index m = y.rows();
  for (Eigen::Index j = m - 3; j >= 0; --j) {
    const double beta = r.beta(j);
    if (beta == 0.0) continue;
    const Eigen::Index len = m - j - 1;
    VectorX v(len);
    v(0) = 1.0;
    v.tail(len - 1) = r.reflectors.col(j).tail(len - 1);
    auto rows = y.bottomRows(len);
    const Eigen::RowVectorX<double> proj = v.transpose() * rows;
    rows.noalias() -= (beta * v) * proj;
  }
}

double tridiagonal_norm(const Tridiagonal& t) {
  const auto m = t.diagonal.size();
  double norm = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double row = std::abs(t.diagonal(i));
    if (i > 0) row += std::abs(t.offdiagonal(i - 1));
    if (i + 1 < m) row += std::abs(t.offdiagonal(i));
    norm = std::max(norm, row);
  }
  return norm;
}

// LU with partial pivoting of (T - lambda I), reused across inverse iterations.
class ShiftedSolver {
 public:
  ShiftedSolver(const Tridiagonal& t, double lambda, double pivot_floor) {
    const auto m = t.diagonal.size();
    u0_.resize(m);
    u1_.assign(m, 0.0);
    u2_.assign(m, 0.0);
    l_.assign(m, 0.0);
    swap_.assign(m, false);
    auto floor = [&](double x) {
      return std::abs(x) < pivot_floor ? (x < 0.0 ? -pivot_floor : pivot_floor) : x;
    };
    double diag = t.diagonal(0) - lambda;
    double sup = m > 1 ? t.offdiagonal(0) : 0.0;
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      const double sub = t.offdiagonal(i);
      const double next_diag = t.diagonal(i + 1) - lambda;
      const double next_sup = i + 2 < m ? t.offdiagonal(i + 1) : 0.0;
      if (std::abs(diag) >= std::abs(sub)) {
        diag = floor(diag);
        const double l = sub / diag;
        u0_[i] = diag;
        u1_[i] = sup;
        l_[i] = l;
        diag = next_diag - l * sup;
        sup = next_sup;
      } else {
        const double l = diag / sub;
        u0_[i] = sub;
        u1_[i] = next_diag;
        u2_[i] = next_sup;
        l_[i] = l;
        swap_[i] = true;
        diag = sup - l * next_diag;
        sup = -l * next_sup;
      }
    }
    u0_[m - 1] = floor(diag);
  }

  void solve(VectorX& y) const {
    const auto m = y.size();
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      if (swap_[i]) std::swap(y(i), y(i + 1));
      y(i + 1) -= l_[i] * y(i);
    }
    for (Eigen::Index i = m - 1; i >= 0; --i) {
      double s = y(i);
      if (i + 1 < m) s -= u1_[i] * y(i + 1);
      if (i + 2 < m) s -= u2_[i] * y(i + 2);
      y(i) = s / u0_[i];
    }
  }

 private:
  std::vector<double> u0_, u1_, u2_, l_;
  std::vector<bool> swap_;
};

VectorX start_vector(Eigen::Index m, int index) {
  // Fixed-seed LCG so runs are reproducible.
  std::uint64_t state = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(index + 1);
  VectorX x(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x(i) = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  return x.normalized();
}

VectorX apply(const Tridiagonal& t, const VectorX& x) {
  const auto m = x.size();
  VectorX y = t.diagonal.cwiseProduct(x);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    y(i) += t.offdiagonal(i) * x(i + 1);
    y(i + 1) += t.offdiagonal(i) * x(i);
  }
  return y;
}

}  // namespace

int sturm_count(const Tridiagonal& t, double x) {
  const auto m = t.diagonal.size();
  const double tiny = std::numeric_limits<double>::min() / eps;
  int count = 0;
  double q = t.diagonal(0) - x;
  for (Eigen::Index i = 0;; ++i) {
    if (std::abs(q) < tiny) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == m) break;
    const double e = t.offdiagonal(i);
    q = t.diagonal(i + 1) - x - e * e / q;
  }
  return count;
}

VectorX tridiagonal_lowest(const Tridiagonal& t, int k, int* iterations) {
  const auto m = t.diagonal.size();
  if (k < 0 || k > m) throw InvalidInput("requested eigenvalue count out of range");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiagonal(i - 1));
    if (i + 1 < m) r += std::abs(t.offdiagonal(i));
    lo = std::min(lo, t.diagonal(i) - r);
    hi = std::max(hi, t.diagonal(i) + r);
  }
  const double span = std::max(hi - lo, std::numeric_limits<double>::min());
  lo -= 2.0 * eps * span + 1e-300;
  hi += 2.0 * eps * span + 1e-300;

  VectorX values(k);
  int total = 0;
  double left = lo;
  for (int j = 0; j < k; ++j) {
    // Smallest x with count(x) > j; bracketed in [left, hi].
    double a = left, b = hi;
    int it = 0;
    while (b - a > 2.0 * eps * std::max(std::abs(a), std::abs(b)) + 1e-300) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(t, mid) > j) b = mid;
      else a = mid;
      if (++it > 4000)
        throw NumericalError("bisection did not converge for eigenvalue " + std::to_string(j),
                             total + it);
    }
    total += it;
    values(j) = 0.5 * (a + b);
    left = a;
  }
  if (iterations) *iterations += total;
  return values;
}

EigenPairs symmetric_lowest(const MatrixX& a, int k) {
  const auto m = a.rows();
  if (a.cols() != m) throw InvalidInput("eigensolver requires a square matrix");
  if (k < 1 || k > m) throw InvalidInput("requested eigenpair count must be in [1, size]");
  if (!a.allFinite()) throw InvalidInput("eigensolver input contains non-finite entries");

  EigenPairs out;
  if (m == 1) {
    out.values = VectorX::Constant(1, a(0, 0));
    out.vectors = MatrixX::Ones(1, 1);
    return out;
  }

  const Reduction red = tridiagonalize(a);
  const Tridiagonal& t = red.t;
  out.values = tridiagonal_lowest(t, k, &out.iterations);

  const double norm = std::max(tridiagonal_norm(t), std::numeric_limits<double>::min());
  const double pivot_floor = eps * norm;
  const double cluster_gap = 1e-3 * norm;
  const double residual_tol = std::sqrt(static_cast<double>(m)) * 64.0 * eps * norm;

  MatrixX y(m, k);
  int cluster_start = 0;
  for (int j = 0; j < k; ++j) {
    if (j > 0 && out.values(j) - out.values(j - 1) > cluster_gap) cluster_start = j;
    // Separate coincident shifts slightly so each solve differs.
    double shift = out.values(j);
    if (j > cluster_start) shift += (j - cluster_start) * 10.0 * eps * norm;
    const ShiftedSolver solver(t, shift, pivot_floor);
    VectorX x = start_vector(m, j);
    bool converged = false;
    for (int it = 0; it < 10; ++it) {
      solver.solve(x);
      for (int c = cluster_start; c < j; ++c) x -= y.col(c).dot(x) * y.col(c);
      const double nx = x.norm();
      if (!(nx > 0.0) || !std::isfinite(nx)) break;
      x /= nx;
      ++out.iterations;
      const double res = (apply(t, x) - out.values(j) * x).norm();
      if (res <= residual_tol && it >= 1) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      const double res = (apply(t, x) - out.values(j) * x).norm();
      if (!(res <= 1e3 * residual_tol))
        throw NumericalError("inverse iteration did not converge for eigenvalue " +
                                 std::to_string(j),
                             out.iterations);
    }
    y.col(j) = x;
  }
  back_transform(red, y);
  out.vectors = std::move(y);
  return out;
}

}  // namespace gamow
