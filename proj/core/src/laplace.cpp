#include "gamow/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "local_fit.hpp"

namespace gamow {

namespace detail {

std::vector<LocalFit> local_fits(const Boundary& b) {
  std::vector<LocalFit> out(b.vertex_count());
  std::vector<int> ring;
  for (std::size_t i = 0; i < b.vertex_count(); ++i) {
    auto& f = out[i];
    f.origin = b.vertex(i);
    f.n = b.normals()[i];
    f.t1 = f.n.unitOrthogonal();
    f.t2 = f.n.cross(f.t1);
    ring.assign(b.neighbors(i).begin(), b.neighbors(i).end());
    for (int j : b.neighbors(i))
      for (int k : b.neighbors(j))
        if (k != static_cast<int>(i) && std::find(ring.begin(), ring.end(), k) == ring.end())
          ring.push_back(k);
    Eigen::MatrixXd a(ring.size(), 5);
    VectorX z(ring.size());
    for (std::size_t r = 0; r < ring.size(); ++r) {
      const Vec3 d = b.vertex(ring[r]) - f.origin;
      const double u = d.dot(f.t1), v = d.dot(f.t2);
      a.row(r) << u * u, u * v, v * v, u, v;
      z[r] = d.dot(f.n);
    }
    const VectorX c = a.colPivHouseholderQr().solve(z);
    for (int k = 0; k < 5; ++k) f.c[k] = c[k];
  }
  return out;
}

}  // namespace detail

namespace {

std::vector<Vec3> fitted_normals(const Boundary& b) {
  const auto fits = detail::local_fits(b);
  std::vector<Vec3> out(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) out[i] = fits[i].normal();
  return out;
}

}  // namespace

VectorX LaplaceOperators::laplacian(const VectorX& f) const {
  return -(stiffness * f).cwiseQuotient(mass);
}

LaplaceOperators laplace_operators(const Boundary& b) {
  const auto n = static_cast<Eigen::Index>(b.vertex_count());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(b.element_count() * 9);
  for (std::size_t e = 0; e < b.element_count(); ++e) {
    const auto& el = b.element(e);
    if (b.dimension() == 2) {
      const double w = 1.0 / b.element_measure(e);
      trip.emplace_back(el[0], el[0], w);
      trip.emplace_back(el[1], el[1], w);
      trip.emplace_back(el[0], el[1], -w);
      trip.emplace_back(el[1], el[0], -w);
      continue;
    }
    const double twice = 2.0 * b.element_measure(e);
    for (int a = 0; a < 3; ++a) {
      const int i = el[a], j = el[(a + 1) % 3], l = el[(a + 2) % 3];
      const double cot = (b.vertex(i) - b.vertex(l)).dot(b.vertex(j) - b.vertex(l)) / twice;
      const double w = 0.5 * cot;
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
    }
  }
  LaplaceOperators ops;
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(trip.begin(), trip.end());
  ops.stiffness.makeCompressed();
  ops.mass = b.vertex_areas();
  return ops;
}

std::vector<Vec3> tangential_gradient(const Boundary& b, const VectorX& f) {
  const auto n = b.vertex_count();
  std::vector<Vec3> grad(n, Vec3::Zero());
  std::vector<double> weight(n, 0.0);
  for (std::size_t e = 0; e < b.element_count(); ++e) {
    const auto& el = b.element(e);
    const double m = b.element_measure(e);
    Vec3 g = Vec3::Zero();
    if (b.dimension() == 2) {
      const Vec3 t = (b.vertex(el[1]) - b.vertex(el[0])) / m;
      g = (f[el[1]] - f[el[0]]) / m * t;
    } else {
      const Vec3& nu = b.element_normal(e);
      for (int a = 0; a < 3; ++a) {
        const Vec3 opp = b.vertex(el[(a + 2) % 3]) - b.vertex(el[(a + 1) % 3]);
        // gradient of the hat function of corner a: nu x opp / (2A)
        g += f[el[a]] * nu.cross(opp) / (2.0 * m);
      }
    }
    for (int a = 0; a < b.element_size(); ++a) {
      grad[el[a]] += m * g;
      weight[el[a]] += m;
    }
  }
  const auto normals = b.normals();
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] /= weight[i];
    grad[i] -= grad[i].dot(normals[i]) * normals[i];
  }
  return grad;
}

IdentityResiduals geometric_identity_residuals(const Boundary& b) {
  if (b.dimension() != 3) throw Unsupported("geometric identity residuals are defined for n = 3");
  const auto ops = laplace_operators(b);
  const auto n = b.vertex_count();
  const auto normals = fitted_normals(b);
  const auto& H = b.curvature().mean;
  const auto& B2 = b.curvature().second_form;
  const auto gradH = tangential_gradient(b, H);

  Eigen::MatrixXd x(n, 3), nu(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    x.row(i) = b.vertex(i).transpose();
    nu.row(i) = normals[i].transpose();
  }
  Eigen::MatrixXd lx(n, 3), lnu(n, 3);
  for (int c = 0; c < 3; ++c) {
    lx.col(c) = ops.laplacian(x.col(c));
    lnu.col(c) = ops.laplacian(nu.col(c));
  }

  IdentityResiduals r;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = ops.mass[i];
    const Vec3 hn = H[i] * normals[i];
    const Vec3 bn = B2[i] * normals[i];
    r.position += m * (lx.row(i).transpose() + hn).squaredNorm();
    r.normal += m * (lnu.row(i).transpose() + bn - gradH[i]).squaredNorm();
    r.position_scale += m * hn.squaredNorm();
    r.normal_scale += m * bn.squaredNorm();
  }
  r.position = std::sqrt(r.position);
  r.normal = std::sqrt(r.normal);
  r.position_scale = std::sqrt(r.position_scale);
  r.normal_scale = std::sqrt(r.normal_scale);
  return r;
}

}  // namespace gamow
