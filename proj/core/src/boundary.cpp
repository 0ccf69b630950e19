#include "gamow/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Geometry>

namespace gamow {

double unit_ball_volume(int n) {
  if (n < 1) throw InvalidInput("unit_ball_volume: dimension must be positive");
  // omega_n = pi^{n/2} / Gamma(n/2 + 1)
  return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

std::string list_ids(const std::vector<int>& ids, std::size_t limit = 12) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) os << (i ? "," : "") << ids[i];
  if (ids.size() > limit) os << ",...";
  return os.str();
}

}  // namespace

Boundary Boundary::curve(std::vector<Vec3> points, std::vector<std::array<int, 2>> segments,
                         const BoundaryOptions& opts) {
  Boundary b;
  b.dim_ = 2;
  b.points_ = std::move(points);
  for (auto& p : b.points_) p.z() = 0.0;
  b.elements_.reserve(segments.size());
  for (const auto& s : segments) b.elements_.push_back({s[0], s[1], -1});
  b.build(opts);
  return b;
}

Boundary Boundary::surface(std::vector<Vec3> points, std::vector<std::array<int, 3>> triangles,
                           const BoundaryOptions& opts) {
  Boundary b;
  b.dim_ = 3;
  b.points_ = std::move(points);
  b.elements_ = std::move(triangles);
  b.build(opts);
  return b;
}

Boundary Boundary::with_vertices(std::vector<Vec3> points) const {
  if (points.size() != points_.size())
    throw InvalidInput("with_vertices: vertex count mismatch");
  Boundary b;
  b.dim_ = dim_;
  b.points_ = std::move(points);
  if (dim_ == 2)
    for (auto& p : b.points_) p.z() = 0.0;
  b.elements_ = elements_;
  b.build(opts_);
  return b;
}

Boundary Boundary::scaled(double factor, const Vec3& center) const {
  if (!(factor > 0.0)) throw InvalidInput("scaled: factor must be positive");
  std::vector<Vec3> pts(points_.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = center + factor * (points_[i] - center);
  return with_vertices(std::move(pts));
}

Boundary Boundary::moved(const Eigen::Matrix3d& rotation, const Vec3& shift) const {
  std::vector<Vec3> pts(points_.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = rotation * points_[i] + shift;
  return with_vertices(std::move(pts));
}

Vec3 Boundary::element_centroid(std::size_t e) const {
  const auto& el = elements_[e];
  if (dim_ == 2) return 0.5 * (points_[el[0]] + points_[el[1]]);
  return (points_[el[0]] + points_[el[1]] + points_[el[2]]) / 3.0;
}

std::span<const int> Boundary::neighbors(std::size_t v) const {
  return {ring_vertices_.data() + ring_offsets_[v],
          static_cast<std::size_t>(ring_offsets_[v + 1] - ring_offsets_[v])};
}

std::span<const int> Boundary::incident_elements(std::size_t v) const {
  return {star_elements_.data() + star_offsets_[v],
          static_cast<std::size_t>(star_offsets_[v + 1] - star_offsets_[v])};
}

void Boundary::build(const BoundaryOptions& opts) {
  opts_ = opts;
  const int nv = static_cast<int>(points_.size());
  const std::size_t ne = elements_.size();
  if (nv == 0 || ne == 0) throw GeometryError("boundary has no vertices or elements");
  const int k = dim_;

  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = elements_[e];
    for (int a = 0; a < k; ++a) {
      if (el[a] < 0 || el[a] >= nv)
        throw GeometryError("element " + std::to_string(e) + " references a missing vertex");
      for (int c = a + 1; c < k; ++c)
        if (el[a] == el[c])
          throw GeometryError("element " + std::to_string(e) + " repeats a vertex", {el[a]});
    }
    if (!points_[el[0]].allFinite() || !points_[el[1]].allFinite() ||
        (k == 3 && !points_[el[2]].allFinite()))
      throw GeometryError("element " + std::to_string(e) + " has non-finite coordinates");
  }

  // Topology: closed and consistently oriented.
  if (k == 2) {
    std::vector<int> out(nv, 0), in(nv, 0);
    for (const auto& el : elements_) {
      ++out[el[0]];
      ++in[el[1]];
    }
    std::vector<int> bad;
    for (int v = 0; v < nv; ++v)
      if (out[v] != 1 || in[v] != 1) bad.push_back(v);
    if (!bad.empty())
      throw GeometryError("curve is not a union of closed oriented loops at vertices " +
                              list_ids(bad),
                          bad);
  } else {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& el : elements_)
      for (int a = 0; a < 3; ++a) ++directed[{el[a], el[(a + 1) % 3]}];
    std::vector<int> bad;
    for (const auto& [edge, count] : directed) {
      auto rev = directed.find({edge.second, edge.first});
      if (count != 1 || rev == directed.end() || rev->second != 1) {
        bad.push_back(edge.first);
        bad.push_back(edge.second);
      }
    }
    if (!bad.empty()) {
      std::sort(bad.begin(), bad.end());
      bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
      throw GeometryError("mesh is not a closed oriented 2-manifold near vertices " +
                              list_ids(bad),
                          bad);
    }
    edges_.clear();
    for (const auto& [edge, count] : directed)
      if (edge.first < edge.second) edges_.push_back({edge.first, edge.second});
  }
  if (k == 2) {
    edges_.clear();
    for (const auto& el : elements_) edges_.push_back({el[0], el[1]});
  }

  // Element geometry.
  element_normals_.assign(ne, Vec3::Zero());
  element_measures_.assign(ne, 0.0);
  element_diameters_.assign(ne, 0.0);
  std::vector<int> degenerate;
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = elements_[e];
    const Vec3& a = points_[el[0]];
    const Vec3& b = points_[el[1]];
    if (k == 2) {
      const Vec3 t = b - a;
      const double len = t.norm();
      element_measures_[e] = len;
      element_diameters_[e] = len;
      if (len > 0.0) element_normals_[e] = Vec3(t.y(), -t.x(), 0.0) / len;
    } else {
      const Vec3& c = points_[el[2]];
      const Vec3 cr = (b - a).cross(c - a);
      const double twice = cr.norm();
      element_measures_[e] = 0.5 * twice;
      element_diameters_[e] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
      if (twice > 0.0) element_normals_[e] = cr / twice;
    }
    if (!(element_measures_[e] > opts.min_element_measure)) {
      for (int a2 = 0; a2 < k; ++a2) degenerate.push_back(el[a2]);
    }
  }
  if (!degenerate.empty())
    throw GeometryError("degenerate elements below the measure floor near vertices " +
                            list_ids(degenerate),
                        degenerate);

  // Adjacency (CSR).
  std::vector<std::vector<int>> ring(nv), star(nv);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = elements_[e];
    for (int a = 0; a < k; ++a) {
      star[el[a]].push_back(static_cast<int>(e));
      for (int c = 0; c < k; ++c)
        if (c != a) ring[el[a]].push_back(el[c]);
    }
  }
  std::vector<int> unused;
  ring_offsets_.assign(nv + 1, 0);
  star_offsets_.assign(nv + 1, 0);
  ring_vertices_.clear();
  star_elements_.clear();
  for (int v = 0; v < nv; ++v) {
    auto& r = ring[v];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (star[v].empty()) unused.push_back(v);
    ring_vertices_.insert(ring_vertices_.end(), r.begin(), r.end());
    star_elements_.insert(star_elements_.end(), star[v].begin(), star[v].end());
    ring_offsets_[v + 1] = static_cast<int>(ring_vertices_.size());
    star_offsets_[v + 1] = static_cast<int>(star_elements_.size());
  }
  if (!unused.empty())
    throw GeometryError("vertices not referenced by any element: " + list_ids(unused), unused);

  // Components.
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& el : elements_)
    for (int a = 1; a < k; ++a) {
      const int r0 = find_root(parent, el[0]);
      const int r1 = find_root(parent, el[a]);
      if (r0 != r1) parent[std::max(r0, r1)] = std::min(r0, r1);
    }
  vertex_component_.assign(nv, -1);
  std::map<int, int> label;
  for (int v = 0; v < nv; ++v) {
    const int r = find_root(parent, v);
    auto [it, inserted] = label.emplace(r, static_cast<int>(label.size()));
    vertex_component_[v] = it->second;
  }
  components_ = static_cast<int>(label.size());
  element_component_.assign(ne, 0);
  for (std::size_t e = 0; e < ne; ++e) element_component_[e] = vertex_component_[elements_[e][0]];

  // Totals.
  total_measure_ = 0.0;
  volume_ = 0.0;
  for (std::size_t e = 0; e < ne; ++e) {
    total_measure_ += element_measures_[e];
    const auto& el = elements_[e];
    if (k == 2) {
      const Vec3& a = points_[el[0]];
      const Vec3& b = points_[el[1]];
      volume_ += 0.5 * (a.x() * b.y() - a.y() * b.x());
    } else {
      volume_ += points_[el[0]].dot(points_[el[1]].cross(points_[el[2]])) / 6.0;
    }
  }
  if (!(volume_ > 0.0))
    throw GeometryError("enclosed signed volume is nonpositive; boundary orientation must put "
                        "normals outside the set");

  max_edge_ = 0.0;
  min_edge_ = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& ed : edges_) {
    const double len = (points_[ed[0]] - points_[ed[1]]).norm();
    max_edge_ = std::max(max_edge_, len);
    min_edge_ = std::min(min_edge_, len);
    sum += len;
  }
  mean_edge_ = sum / static_cast<double>(edges_.size());

  // Vertex areas and normals.
  vertex_areas_ = VectorX::Zero(nv);
  vertex_normals_.assign(nv, Vec3::Zero());
  if (k == 2) {
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& el = elements_[e];
      for (int a = 0; a < 2; ++a) {
        vertex_areas_[el[a]] += 0.5 * element_measures_[e];
        vertex_normals_[el[a]] += element_normals_[e];
      }
    }
  } else {
    for (std::size_t e = 0; e < ne; ++e) {
      const auto& el = elements_[e];
      const double area = element_measures_[e];
      for (int a = 0; a < 3; ++a) {
        const int i = el[a], j = el[(a + 1) % 3], l = el[(a + 2) % 3];
        const Vec3 eij = points_[j] - points_[i];
        const Vec3 eil = points_[l] - points_[i];
        const Vec3 ejl = points_[l] - points_[j];
        const double angle_i = std::atan2(eij.cross(eil).norm(), eij.dot(eil));
        vertex_normals_[i] += angle_i * element_normals_[e];

        // Mixed Voronoi area.
        const double dot_i = eij.dot(eil);
        const double dot_j = (-eij).dot(ejl);
        const double dot_l = (-eil).dot(-ejl);
        if (dot_i < 0.0) {
          vertex_areas_[i] += 0.5 * area;
        } else if (dot_j < 0.0 || dot_l < 0.0) {
          vertex_areas_[i] += 0.25 * area;
        } else {
          const double cot_j = dot_j / (2.0 * area);
          const double cot_l = dot_l / (2.0 * area);
          vertex_areas_[i] += 0.125 * (eil.squaredNorm() * cot_j + eij.squaredNorm() * cot_l);
        }
      }
    }
  }
  std::vector<int> flat;
  for (int v = 0; v < nv; ++v) {
    const double len = vertex_normals_[v].norm();
    if (!(len > 1e-300) || !(vertex_areas_[v] > 0.0)) {
      flat.push_back(v);
      continue;
    }
    vertex_normals_[v] /= len;
  }
  if (!flat.empty())
    throw GeometryError("vertex stencils with vanishing normal or area: " + list_ids(flat), flat);

  curvature_ = compute_curvature(*this);
}

}  // namespace gamow
