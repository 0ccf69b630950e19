#include "gamow/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace gamow::quad {

namespace {

Rule1D build_gauss(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // map [-1, 1] -> [0, 1]
    r.nodes[n - 1 - i] = 0.5 * (z + 1.0);
    r.weights[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

TriangleRule symmetric_rule(int degree) {
  TriangleRule r;
  auto add = [&](double a, double b, double c, double w) {
    r.bary.push_back({a, b, c});
    r.weights.push_back(w);
  };
  if (degree <= 1) {
    add(1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0);
  } else if (degree == 2) {
    add(2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3);
    add(1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 3);
    add(1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3);
  } else {
    // Degree-5, 7-point rule (Radon).
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
    add(1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40.0);
    add(b1, a1, a1, w1);
    add(a1, b1, a1, w1);
    add(a1, a1, b1, w1);
    add(b2, a2, a2, w2);
    add(a2, b2, a2, w2);
    add(a2, a2, b2, w2);
  }
  return r;
}

TriangleRule collapsed(int n) {
  const auto& g = gauss_legendre(n);
  TriangleRule r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = g.nodes[i], v = g.nodes[j];
      const double s = u, t = v * (1.0 - u);
      r.bary.push_back({1.0 - s - t, s, t});
      r.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  return r;
}

std::mutex g_cache_mutex;

}  // namespace

const Rule1D& gauss_legendre(int points) {
  if (points < 1 || points > 64) throw InvalidInput("Gauss-Legendre order must be in [1, 64]");
  static std::map<int, Rule1D> cache;
  std::lock_guard lock(g_cache_mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, build_gauss(points)).first;
  return it->second;
}

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule d1 = symmetric_rule(1);
  static const TriangleRule d2 = symmetric_rule(2);
  static const TriangleRule d5 = symmetric_rule(5);
  if (degree <= 1) return d1;
  if (degree == 2) return d2;
  if (degree <= 5) return d5;
  throw InvalidInput("triangle_rule: supported degrees are 1, 2, 5");
}

const TriangleRule& collapsed_gauss_rule(int points) {
  static std::map<int, TriangleRule> cache;
  {
    std::lock_guard lock(g_cache_mutex);
    auto it = cache.find(points);
    if (it != cache.end()) return it->second;
  }
  TriangleRule rule = collapsed(points);
  std::lock_guard lock(g_cache_mutex);
  return cache.emplace(points, std::move(rule)).first->second;
}

std::array<double, 3> closest_point_barycentric(const Vec3& x, const Vec3& a, const Vec3& b,
                                                const Vec3& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  const Vec3 ab = b - a, ac = c - a, ap = x - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {1.0, 0.0, 0.0};
  const Vec3 bp = x - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {0.0, 1.0, 0.0};
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {1.0 - v, v, 0.0};
  }
  const Vec3 cp = x - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {0.0, 0.0, 1.0};
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {1.0 - w, 0.0, w};
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {0.0, 1.0 - w, w};
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return {1.0 - v - w, v, w};
}

namespace {

// Antiderivatives in u = s - t0 of (1/2) log(u^2 + e^2) and u (1/2) log(u^2 + e^2).
double log_f0(double u, double e) {
  const double r2 = u * u + e * e;
  double val = -u;
  if (r2 > 0.0) val += 0.5 * u * std::log(r2);
  if (e > 0.0) val += e * std::atan(u / e);
  return val;
}

double log_f1(double u, double e) {
  const double r2 = u * u + e * e;
  double val = -0.25 * u * u;
  if (r2 > 0.0) val += 0.25 * r2 * std::log(r2);
  return val;
}

}  // namespace

std::array<double, 2> segment_log_moments(const Vec3& x, const Vec3& p, const Vec3& q) {
  const Vec3 d = q - p;
  const double len = d.norm();
  const Vec3 tau = d / len;
  const Vec3 rel = x - p;
  const double t0 = rel.dot(tau);
  const double e = std::sqrt(std::max(0.0, rel.squaredNorm() - t0 * t0));
  const double a = -t0, b = len - t0;
  const double i0 = log_f0(b, e) - log_f0(a, e);
  const double i1 = log_f1(b, e) - log_f1(a, e);
  // phi_q(s) = s / len = (u + t0) / len
  const double mq = (i1 + t0 * i0) / len;
  return {i0 - mq, mq};
}

}  // namespace gamow::quad
