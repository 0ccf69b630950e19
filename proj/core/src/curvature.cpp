#include <cmath>

#include <Eigen/Dense>

#include "gamow/boundary.hpp"

namespace gamow {

namespace {

CurvatureField curve_curvature(const Boundary& b) {
  const auto n = static_cast<Eigen::Index>(b.vertex_count());
  CurvatureField out;
  out.mean = VectorX::Zero(n);
  out.second_form = VectorX::Zero(n);
  out.kappa1 = VectorX::Zero(n);
  out.kappa2 = VectorX::Zero(n);

  std::vector<int> prev(n, -1), next(n, -1);
  for (const auto& el : b.elements()) {
    next[el[0]] = el[1];
    prev[el[1]] = el[0];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& p = b.vertex(prev[i]);
    const Vec3& x = b.vertex(i);
    const Vec3& q = b.vertex(next[i]);
    const Vec3 u = x - p;
    const Vec3 w = q - x;
    const double chord = (q - p).norm();
    const double cross = u.x() * w.y() - u.y() * w.x();
    // Circle through (p, x, q): kappa = 2 sin(turn) / |q - p|, signed by turning direction.
    double kappa = 0.0;
    if (chord > 0.0) kappa = 2.0 * cross / (u.norm() * w.norm() * chord);
    else out.degenerate.push_back(static_cast<int>(i));
    out.mean[i] = kappa;
    out.second_form[i] = kappa * kappa;
    out.kappa1[i] = kappa;
  }
  return out;
}

CurvatureField surface_curvature(const Boundary& b) {
  const auto n = static_cast<Eigen::Index>(b.vertex_count());
  const auto pts = b.vertices();
  const auto normals = b.normals();
  const VectorX& area = b.vertex_areas();

  // Cotangent mean-curvature normal: sum_j (cot a + cot b)(x_i - x_j) / (2 A_i) = H nu.
  std::vector<Vec3> hn(n, Vec3::Zero());
  for (std::size_t e = 0; e < b.element_count(); ++e) {
    const auto& el = b.element(e);
    const double twice = 2.0 * b.element_measure(e);
    for (int a = 0; a < 3; ++a) {
      const int i = el[a], j = el[(a + 1) % 3], l = el[(a + 2) % 3];
      const Vec3 u = pts[i] - pts[l];
      const Vec3 w = pts[j] - pts[l];
      const double cot = u.dot(w) / twice;
      const Vec3 d = pts[i] - pts[j];
      hn[i] += cot * d;
      hn[j] -= cot * d;
    }
  }

  CurvatureField out;
  out.mean = VectorX::Zero(n);
  out.second_form = VectorX::Zero(n);
  out.kappa1 = VectorX::Zero(n);
  out.kappa2 = VectorX::Zero(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 hv = hn[i] / (2.0 * area[i]);
    const double h = hv.dot(normals[i]);
    out.mean[i] = h;

    // Symmetric shape operator S (d nu = S dx) fitted on the one-ring in a tangent frame.
    const Vec3& nu = normals[i];
    Vec3 t1 = nu.unitOrthogonal();
    Vec3 t2 = nu.cross(t1);
    Eigen::Matrix3d normal_eq = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (int j : b.neighbors(i)) {
      const Vec3 e = pts[j] - pts[i];
      const Vec3 dn = normals[j] - nu;
      const double e1 = e.dot(t1), e2 = e.dot(t2);
      const double d1 = dn.dot(t1), d2 = dn.dot(t2);
      const double w = 1.0 / std::max(e.squaredNorm(), 1e-300);
      // rows: [e1 e2 0] . (s11 s12 s22) = d1 ; [0 e1 e2] . (...) = d2
      const Eigen::Vector3d r1(e1, e2, 0.0), r2(0.0, e1, e2);
      normal_eq += w * (r1 * r1.transpose() + r2 * r2.transpose());
      rhs += w * (d1 * r1 + d2 * r2);
    }
    Eigen::LDLT<Eigen::Matrix3d> ldlt(normal_eq);
    const double scale = normal_eq.diagonal().maxCoeff();
    double k1 = 0.5 * h, k2 = 0.5 * h;
    if (ldlt.info() == Eigen::Success && scale > 0.0 &&
        ldlt.vectorD().cwiseAbs().minCoeff() > 1e-10 * scale) {
      const Eigen::Vector3d s = ldlt.solve(rhs);
      const double mean = 0.5 * (s[0] + s[2]);
      const double dev = std::sqrt(0.25 * (s[0] - s[2]) * (s[0] - s[2]) + s[1] * s[1]);
      // Keep the fitted anisotropy, pin the trace to the cotangent estimate of H.
      const double shift = 0.5 * h - mean;
      k1 = mean + dev + shift;
      k2 = mean - dev + shift;
    } else {
      out.degenerate.push_back(static_cast<int>(i));
    }
    out.kappa1[i] = k1;
    out.kappa2[i] = k2;
    out.second_form[i] = k1 * k1 + k2 * k2;
  }
  return out;
}

}  // namespace

CurvatureField compute_curvature(const Boundary& b) {
  return b.dimension() == 2 ? curve_curvature(b) : surface_curvature(b);
}

}  // namespace gamow
