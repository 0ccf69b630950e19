// Independent reference values used by the tests. Nothing here calls the
// library's quadrature, curvature or eigen code.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Radial potential of the unit-density ball of radius R, kernel 1/(4 pi r).
inline double ball_potential(double R, double r) {
  return r <= R ? R * R / 2.0 - r * r / 6.0 : R * R * R / (3.0 * r);
}

// Disk of radius R, kernel (1/2pi) log(1/r).
inline double disk_potential(double R, double r) {
  return r <= R ? (R * R - r * r) / 4.0 + 0.5 * R * R * std::log(1.0 / R)
                : 0.5 * R * R * std::log(1.0 / r);
}

inline double ball_nonlocal(double R) { return 8.0 * pi / 15.0 * std::pow(R, 5); }
inline double disk_nonlocal() { return pi / 8.0; }

// Potential of B_R \ B_rho at radius r by summing uniform shells:
// a shell of radius s and thickness ds contributes s^2 ds / max(r, s).
inline double annulus_potential_by_shells(double R, double rho, double r, int n = 20000) {
  double sum = 0.0;
  const double h = (R - rho) / n;
  for (int i = 0; i < n; ++i) {
    const double s = rho + (i + 0.5) * h;
    sum += s * s * h / std::max(r, s);
  }
  return sum;
}

// Midpoint voxel quadrature of int_E dy / (4 pi |x - y|) over a cube grid
// covering [-L, L]^3, with E given by an indicator.
inline double voxel_potential(const std::function<bool(const Eigen::Vector3d&)>& inside,
                              const Eigen::Vector3d& x, double L, int cells) {
  const double h = 2.0 * L / cells;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j)
      for (int k = 0; k < cells; ++k) {
        const Eigen::Vector3d y(-L + (i + 0.5) * h, -L + (j + 0.5) * h, -L + (k + 0.5) * h);
        if (!inside(y)) continue;
        const double r = (x - y).norm();
        if (r < 1e-12) continue;
        sum += 1.0 / r;
      }
  return sum * h * h * h / (4.0 * pi);
}

// Unnormalized real spherical harmonics as Cartesian polynomials on the unit sphere.
inline double harmonic(int l, int m, const Eigen::Vector3d& p) {
  const double x = p.x(), y = p.y(), z = p.z();
  switch (l * 10 + (m + 5)) {
    case 14: return y;
    case 15: return z;
    case 16: return x;
    case 23: return x * y;
    case 24: return y * z;
    case 25: return 3.0 * z * z - 1.0;
    case 26: return x * z;
    case 27: return x * x - y * y;
    case 32: return y * (3.0 * x * x - y * y);
    case 33: return x * y * z;
    case 34: return y * (5.0 * z * z - 1.0);
    case 35: return z * (5.0 * z * z - 3.0);
    case 36: return x * (5.0 * z * z - 1.0);
    case 37: return z * (x * x - y * y);
    case 38: return x * (x * x - 3.0 * y * y);
    default: return 0.0;
  }
}

// Funk-Hecke eigenvalue of int_{S^2} f(y) / |x - y| dsigma(y): 4 pi / (2l + 1).
inline double funk_hecke(int l) { return 4.0 * pi / (2.0 * l + 1.0); }

// Second variation of the unit ball, derived from the Funk-Hecke and Fourier
// eigenvalues of the kernels plus d_nu v = -1/n.
inline double ball_mode(int n, int l, double gamma) {
  if (n == 3) {
    const double kernel = funk_hecke(l) / (4.0 * pi);
    return l * (l + 1.0) - 2.0 - 2.0 * gamma / 3.0 + 2.0 * gamma * kernel;
  }
  // int_{S^1} log(1/|x - y|) cos(k t) dt = (pi / k) cos(k s), kernel prefactor 1 / (2 pi)
  const double kernel = (pi / l) / (2.0 * pi);
  return l * l - 1.0 - gamma + 2.0 * gamma * kernel;
}

// Central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Principal curvatures of the ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 at p,
// from the first and second fundamental forms of the implicit surface.
inline Eigen::Vector2d ellipsoid_curvatures(const Eigen::Vector3d& axes, const Eigen::Vector3d& p) {
  const Eigen::Vector3d g(2 * p.x() / (axes.x() * axes.x()), 2 * p.y() / (axes.y() * axes.y()),
                          2 * p.z() / (axes.z() * axes.z()));
  const Eigen::Matrix3d hess = Eigen::Vector3d(2 / (axes.x() * axes.x()), 2 / (axes.y() * axes.y()),
                                               2 / (axes.z() * axes.z()))
                                   .asDiagonal();
  const double gn = g.norm();
  const Eigen::Vector3d n = g / gn;
  const Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - n * n.transpose();
  const Eigen::Matrix3d shape = P * hess * P / gn;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(shape);
  // eigenvalues: 0 (normal direction) and the two curvatures
  Eigen::Vector3d ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + 3, [](double a, double b) { return std::abs(a) < std::abs(b); });
  return {std::max(ev[1], ev[2]), std::min(ev[1], ev[2])};
}

// Surface integral of f(k1, k2) over the ellipsoid with semi-axes `axes`, by
// the midpoint rule in (theta, phi).
inline double ellipsoid_integral(const Eigen::Vector3d& axes,
                                 const std::function<double(double, double)>& f,
                                 int nt = 600, int np = 1200) {
  double sum = 0.0;
  const double dt = pi / nt, dp = 2.0 * pi / np;
  for (int i = 0; i < nt; ++i) {
    const double t = (i + 0.5) * dt;
    for (int j = 0; j < np; ++j) {
      const double p = (j + 0.5) * dp;
      const Eigen::Vector3d x(axes.x() * std::sin(t) * std::cos(p),
                              axes.y() * std::sin(t) * std::sin(p), axes.z() * std::cos(t));
      const Eigen::Vector3d xt(axes.x() * std::cos(t) * std::cos(p),
                               axes.y() * std::cos(t) * std::sin(p), -axes.z() * std::sin(t));
      const Eigen::Vector3d xp(-axes.x() * std::sin(t) * std::sin(p),
                               axes.y() * std::sin(t) * std::cos(p), 0.0);
      const Eigen::Vector2d k = ellipsoid_curvatures(axes, x);
      sum += f(k[0], k[1]) * xt.cross(xp).norm() * dt * dp;
    }
  }
  return sum;
}

}  // namespace oracle
