#include "gamow/potential.hpp"

#include <algorithm>
#include <cmath>

#include "gamow/parallel.hpp"
#include "gamow/quadrature.hpp"

namespace gamow {

KernelParams KernelParams::for_dimension(int n) {
  if (n < 2) throw InvalidInput("Newtonian kernel requires n >= 2");
  KernelParams k;
  k.dimension = n;
  k.constant = n == 2 ? 1.0 / (2.0 * pi) : 1.0 / (n * (n - 2) * unit_ball_volume(n));
  return k;
}

double KernelParams::operator()(double r) const {
  if (dimension == 2) return constant * std::log(1.0 / r);
  return constant * std::pow(r, 2 - dimension);
}

namespace {

/// Physical quadrature points of one element with hat-function values.
struct QuadPoint {
  Vec3 x;
  double w;                  // physical weight (includes measure)
  std::array<double, 3> phi; // hat values at x
};

struct ElementData {
  std::array<Vec3, 3> v;
  Vec3 centroid;
  Vec3 normal;
  double measure = 0.0;
  double diameter = 0.0;
  int component = 0;
  std::vector<QuadPoint> coarse;  // degree 2 (n = 3) / 3-point Gauss (n = 2)
  std::vector<QuadPoint> fine;    // degree 5 (n = 3) / 8-point Gauss (n = 2)
};

enum class Tier { near, mid, far };

class ElementCache {
public:
  explicit ElementCache(const Boundary& b) : dim_(b.dimension()), data_(b.element_count()) {
    for (std::size_t e = 0; e < b.element_count(); ++e) {
      auto& d = data_[e];
      const auto& el = b.element(e);
      d.v[0] = b.vertex(el[0]);
      d.v[1] = b.vertex(el[1]);
      d.v[2] = dim_ == 3 ? b.vertex(el[2]) : Vec3::Zero();
      d.centroid = b.element_centroid(e);
      d.normal = b.element_normal(e);
      d.measure = b.element_measure(e);
      d.diameter = b.element_diameter(e);
      d.component = b.element_components()[e];
      if (dim_ == 3) {
        fill_triangle(d, quad::triangle_rule(2), d.coarse);
        fill_triangle(d, quad::triangle_rule(5), d.fine);
      } else {
        fill_segment(d, quad::gauss_legendre(3), d.coarse);
        fill_segment(d, quad::gauss_legendre(8), d.fine);
      }
    }
  }

  const ElementData& operator[](std::size_t e) const { return data_[e]; }
  std::size_t size() const { return data_.size(); }

  Tier classify(const Vec3& x, std::size_t e, const QuadratureOptions& o) const {
    const auto& d = data_[e];
    const double dist = (x - d.centroid).norm();
    if (dist < o.near_factor * d.diameter) return Tier::near;
    if (dist < o.mid_factor * d.diameter) return Tier::mid;
    return Tier::far;
  }

  Tier classify_pair(std::size_t f, std::size_t g, const QuadratureOptions& o) const {
    const auto& a = data_[f];
    const auto& b = data_[g];
    const double dist = (a.centroid - b.centroid).norm();
    const double size = std::max(a.diameter, b.diameter);
    if (dist < o.near_factor * size) return Tier::near;
    if (dist < o.mid_factor * size) return Tier::mid;
    return Tier::far;
  }

private:
  static void fill_triangle(const ElementData& d, const quad::TriangleRule& r,
                            std::vector<QuadPoint>& out) {
    for (std::size_t q = 0; q < r.weights.size(); ++q) {
      const auto& bc = r.bary[q];
      out.push_back({bc[0] * d.v[0] + bc[1] * d.v[1] + bc[2] * d.v[2], r.weights[q] * d.measure,
                     {bc[0], bc[1], bc[2]}});
    }
  }
  static void fill_segment(const ElementData& d, const quad::Rule1D& r,
                           std::vector<QuadPoint>& out) {
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
      const double t = r.nodes[q];
      out.push_back({(1.0 - t) * d.v[0] + t * d.v[1], r.weights[q] * d.measure, {1.0 - t, t, 0.0}});
    }
  }

  int dim_;
  std::vector<ElementData> data_;
};

/// Hat moments of kernel(|x - y|) over a triangle with tiered quadrature.
template <class Kernel>
std::array<double, 3> triangle_moments(const ElementCache& cache, std::size_t g, const Vec3& x,
                                       Tier tier, Kernel&& kernel) {
  const auto& d = cache[g];
  if (tier == Tier::near) return quad::duffy_moments(x, d.v, kernel);
  const auto& pts = tier == Tier::mid ? d.fine : d.coarse;
  std::array<double, 3> m{0.0, 0.0, 0.0};
  for (const auto& q : pts) {
    const double k = kernel((x - q.x).norm()) * q.w;
    m[0] += k * q.phi[0];
    m[1] += k * q.phi[1];
    m[2] += k * q.phi[2];
  }
  return m;
}

template <class Kernel>
double triangle_integral(const ElementCache& cache, std::size_t g, const Vec3& x, Tier tier,
                         Kernel&& kernel) {
  const auto& d = cache[g];
  if (tier == Tier::near) {
    const auto m = quad::duffy_moments(x, d.v, kernel);
    return m[0] + m[1] + m[2];
  }
  const auto& pts = tier == Tier::mid ? d.fine : d.coarse;
  double s = 0.0;
  for (const auto& q : pts) s += kernel((x - q.x).norm()) * q.w;
  return s;
}

/// Exact int_g log|x - y| against hats (n = 2).
std::array<double, 2> segment_log(const ElementCache& cache, std::size_t g, const Vec3& x) {
  const auto& d = cache[g];
  return quad::segment_log_moments(x, d.v[0], d.v[1]);
}

constexpr auto inverse_distance = [](double r) { return 1.0 / r; };

double potential_impl(const Boundary& b, const ElementCache& cache, const Vec3& x,
                      const QuadratureOptions& opts) {
  const auto kp = KernelParams::for_dimension(b.dimension());
  double sum = 0.0;
  for (std::size_t g = 0; g < cache.size(); ++g) {
    const auto& d = cache[g];
    const double dist = (d.v[0] - x).dot(d.normal);
    if (dist == 0.0) continue;
    if (b.dimension() == 2) {
      const auto m = segment_log(cache, g, x);
      sum += dist * (-(m[0] + m[1]));
    } else {
      sum += dist * triangle_integral(cache, g, x, cache.classify(x, g, opts), inverse_distance);
    }
  }
  if (b.dimension() == 2) return kp.constant * (0.5 * sum + 0.5 * b.signed_volume());
  return 0.5 * kp.constant * sum;
}

Vec3 gradient_impl(const Boundary& b, const ElementCache& cache, const Vec3& x,
                   const QuadratureOptions& opts) {
  const auto kp = KernelParams::for_dimension(b.dimension());
  Vec3 g_sum = Vec3::Zero();
  for (std::size_t g = 0; g < cache.size(); ++g) {
    const auto& d = cache[g];
    double integral = 0.0;  // int_g G / c
    if (b.dimension() == 2) {
      const auto m = segment_log(cache, g, x);
      integral = -(m[0] + m[1]);
    } else {
      integral = triangle_integral(cache, g, x, cache.classify(x, g, opts), inverse_distance);
    }
    g_sum += integral * d.normal;
  }
  return -kp.constant * g_sum;
}

}  // namespace

double potential_at(const Boundary& b, const Vec3& x, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  return potential_impl(b, cache, x, opts);
}

Vec3 potential_gradient_at(const Boundary& b, const Vec3& x, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  return gradient_impl(b, cache, x, opts);
}

VectorX potential_on_vertices(const Boundary& b, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  VectorX v(static_cast<Eigen::Index>(b.vertex_count()));
  parallel_for(b.vertex_count(), opts.threads,
               [&](std::size_t i) { v[i] = potential_impl(b, cache, b.vertex(i), opts); });
  return v;
}

VectorX normal_derivative(const Boundary& b, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  const auto normals = b.normals();
  VectorX dv(static_cast<Eigen::Index>(b.vertex_count()));
  parallel_for(b.vertex_count(), opts.threads, [&](std::size_t i) {
    dv[i] = gradient_impl(b, cache, b.vertex(i), opts).dot(normals[i]);
  });
  return dv;
}

PotentialField potential_field(const Boundary& b, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  const auto normals = b.normals();
  PotentialField f;
  f.value.resize(static_cast<Eigen::Index>(b.vertex_count()));
  f.normal_derivative.resize(static_cast<Eigen::Index>(b.vertex_count()));
  parallel_for(b.vertex_count(), opts.threads, [&](std::size_t i) {
    f.value[i] = potential_impl(b, cache, b.vertex(i), opts);
    f.normal_derivative[i] = gradient_impl(b, cache, b.vertex(i), opts).dot(normals[i]);
  });
  return f;
}

double nonlocal_energy(const Boundary& b, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  const std::size_t ne = cache.size();
  std::vector<double> rows(ne, 0.0);
  const int n = b.dimension();

  if (n == 3) {
    const auto distance = [](double r) { return r; };
    parallel_for(ne, opts.threads, [&](std::size_t f) {
      const auto& a = cache[f];
      double row = 0.0;
      for (std::size_t g = 0; g < ne; ++g) {
        const auto& c = cache[g];
        const double nn = a.normal.dot(c.normal);
        const Tier tier = cache.classify_pair(f, g, opts);
        double pair = 0.0;
        if (f == g) {
          // Self pair: kernel has a conical kink on the diagonal.
          for (const auto& q : a.fine) {
            const auto m = quad::duffy_moments(q.x, c.v, distance);
            pair += q.w * (m[0] + m[1] + m[2]);
          }
        } else {
          const auto& outer = tier == Tier::far ? a.coarse : a.fine;
          const auto& inner = tier == Tier::far ? c.coarse : c.fine;
          for (const auto& q : outer)
            for (const auto& p : inner) pair += q.w * p.w * (q.x - p.x).norm();
        }
        row += nn * pair;
      }
      rows[f] = row;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return -0.5 * KernelParams::for_dimension(3).constant * total;
  }

  // n = 2: kernel (r^2 / 4) log r is C^1, plain Gauss with refinement for near pairs.
  const auto& fine = quad::gauss_legendre(12);
  parallel_for(ne, opts.threads, [&](std::size_t f) {
    const auto& a = cache[f];
    double row = 0.0;
    for (std::size_t g = 0; g < ne; ++g) {
      const auto& c = cache[g];
      const double nn = a.normal.dot(c.normal);
      const Tier tier = cache.classify_pair(f, g, opts);
      double pair = 0.0;
      auto kern = [](double r) { return r > 0.0 ? 0.25 * r * r * std::log(r) : 0.0; };
      if (tier == Tier::far) {
        for (const auto& q : a.coarse)
          for (const auto& p : c.coarse) pair += q.w * p.w * kern((q.x - p.x).norm());
      } else {
        for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
          const Vec3 x = (1.0 - fine.nodes[i]) * a.v[0] + fine.nodes[i] * a.v[1];
          for (std::size_t j = 0; j < fine.nodes.size(); ++j) {
            const Vec3 y = (1.0 - fine.nodes[j]) * c.v[0] + fine.nodes[j] * c.v[1];
            pair += fine.weights[i] * fine.weights[j] * kern((x - y).norm());
          }
        }
        pair *= a.measure * c.measure;
      }
      row += nn * pair;
    }
    rows[f] = row;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  const double vol = b.signed_volume();
  return KernelParams::for_dimension(2).constant * (total + vol * vol);
}

namespace {

/// Local 3x3 (or 2x2) Galerkin block  int_f int_g phi_a(x) phi_b(y) k(x, y) / c.
std::array<std::array<double, 3>, 3> galerkin_block(const ElementCache& cache, int dim,
                                                    std::size_t f, std::size_t g,
                                                    const QuadratureOptions& opts) {
  std::array<std::array<double, 3>, 3> blk{};
  const auto& a = cache[f];
  const Tier tier = cache.classify_pair(f, g, opts);
  if (dim == 2) {
    const auto& outer = tier == Tier::far ? a.coarse : a.fine;
    for (const auto& q : outer) {
      const auto m = segment_log(cache, g, q.x);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) blk[i][j] -= q.w * q.phi[i] * m[j];
    }
    return blk;
  }
  const auto& outer = tier == Tier::far ? a.coarse : a.fine;
  for (const auto& q : outer) {
    const auto m = triangle_moments(cache, g, q.x, tier, inverse_distance);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) blk[i][j] += q.w * q.phi[i] * m[j];
  }
  return blk;
}

}  // namespace

MatrixX kernel_matrix(const Boundary& b, const KernelMatrixOptions& opts) {
  const auto nv = b.vertex_count();
  if (nv > opts.max_vertices)
    throw InvalidInput("kernel_matrix: " + std::to_string(nv) +
                       " vertices exceeds the dense assembly cap of " +
                       std::to_string(opts.max_vertices));
  const ElementCache cache(b);
  const int dim = b.dimension();
  const int k = b.element_size();
  const std::size_t ne = cache.size();
  const auto N = static_cast<Eigen::Index>(nv);
  MatrixX K = MatrixX::Zero(N, N);

  const std::size_t batch = 32;
  MatrixX rows(static_cast<Eigen::Index>(batch * k), N);
  for (std::size_t start = 0; start < ne; start += batch) {
    const std::size_t count = std::min(batch, ne - start);
    rows.setZero();
    parallel_for(count, opts.quadrature.threads, [&](std::size_t local) {
      const std::size_t f = start + local;
      for (std::size_t g = 0; g < ne; ++g) {
        const auto blk = galerkin_block(cache, dim, f, g, opts.quadrature);
        const auto& elg = b.element(g);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            rows(static_cast<Eigen::Index>(local * k + i), elg[j]) += blk[i][j];
      }
    });
    for (std::size_t local = 0; local < count; ++local) {
      const auto& elf = b.element(start + local);
      for (int i = 0; i < k; ++i) K.row(elf[i]) += rows.row(static_cast<Eigen::Index>(local * k + i));
    }
  }
  const double c = KernelParams::for_dimension(dim).constant;
  MatrixX sym = 0.5 * c * (K + K.transpose());
  return sym;
}

VectorX kernel_row_integrals(const Boundary& b, const QuadratureOptions& opts) {
  const auto nv = static_cast<Eigen::Index>(b.vertex_count());
  if (b.dimension() == 2) return VectorX::Constant(nv, b.total_measure());
  const ElementCache cache(b);
  VectorX out(nv);
  parallel_for(b.vertex_count(), opts.threads, [&](std::size_t i) {
    const Vec3& x = b.vertex(i);
    double s = 0.0;
    for (std::size_t g = 0; g < cache.size(); ++g)
      s += triangle_integral(cache, g, x, cache.classify(x, g, opts), inverse_distance);
    out[i] = s;
  });
  return out;
}

MatrixX component_kernel_integrals(const Boundary& b, const QuadratureOptions& opts) {
  const ElementCache cache(b);
  const int comps = b.component_count();
  const std::size_t ne = cache.size();
  const int dim = b.dimension();
  std::vector<VectorX> rows(ne, VectorX::Zero(comps));
  parallel_for(ne, opts.threads, [&](std::size_t f) {
    for (std::size_t g = 0; g < ne; ++g) {
      const auto blk = galerkin_block(cache, dim, f, g, opts);
      double s = 0.0;
      for (const auto& r : blk)
        for (double v : r) s += v;
      rows[f][cache[g].component] += s;
    }
  });
  MatrixX I = MatrixX::Zero(comps, comps);
  for (std::size_t f = 0; f < ne; ++f) I.row(cache[f].component) += rows[f].transpose();
  const double c = KernelParams::for_dimension(dim).constant;
  return 0.5 * c * (I + I.transpose());
}

}  // namespace gamow
