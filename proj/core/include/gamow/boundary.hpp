#pragma once

#include <array>
#include <span>
#include <vector>

#include "gamow/common.hpp"

namespace gamow {

/// Element of a discrete boundary. Triangles use all three slots; polygon
/// segments use the first two and store -1 in the last.
using Element = std::array<int, 3>;

struct BoundaryOptions {
  /// Elements with (n-1)-measure below this floor are rejected at ingestion.
  double min_element_measure = 1e-14;
};

/// Per-vertex curvature data. H is the sum of principal curvatures, positive
/// for convex sets with the outward normal.
struct CurvatureField {
  VectorX mean;          // H
  VectorX second_form;   // |B|^2
  VectorX kappa1;        // largest principal curvature (n = 3), H for n = 2
  VectorX kappa2;        // smallest principal curvature (n = 3), unused for n = 2
  std::vector<int> degenerate;  // vertices whose stencil could not be fitted
};

/// A closed, oriented boundary of a set E in R^2 (polygonal loops) or R^3
/// (triangle mesh). Points are stored as 3-vectors; planar curves keep z = 0.
///
/// Construction validates topology and orientation and caches per-element
/// and per-vertex geometry. Instances are immutable.
class Boundary {
public:
  static Boundary curve(std::vector<Vec3> points, std::vector<std::array<int, 2>> segments,
                        const BoundaryOptions& opts = {});
  static Boundary surface(std::vector<Vec3> points, std::vector<std::array<int, 3>> triangles,
                          const BoundaryOptions& opts = {});

  /// Same connectivity, new vertex positions. Revalidates.
  Boundary with_vertices(std::vector<Vec3> points) const;
  /// x -> center + factor * (x - center).
  Boundary scaled(double factor, const Vec3& center = Vec3::Zero()) const;
  /// x -> rotation * x + shift.
  Boundary moved(const Eigen::Matrix3d& rotation, const Vec3& shift) const;

  int dimension() const noexcept { return dim_; }
  std::size_t vertex_count() const noexcept { return points_.size(); }
  std::size_t element_count() const noexcept { return elements_.size(); }
  /// Number of vertices per element: n.
  int element_size() const noexcept { return dim_; }

  std::span<const Vec3> vertices() const noexcept { return points_; }
  const Vec3& vertex(std::size_t i) const { return points_[i]; }
  std::span<const Element> elements() const noexcept { return elements_; }
  const Element& element(std::size_t e) const { return elements_[e]; }

  /// Unit outward normal of a flat element.
  const Vec3& element_normal(std::size_t e) const { return element_normals_[e]; }
  /// Length (n = 2) or area (n = 3) of an element.
  double element_measure(std::size_t e) const { return element_measures_[e]; }
  Vec3 element_centroid(std::size_t e) const;
  /// Longest edge of the element (its own length for a segment).
  double element_diameter(std::size_t e) const { return element_diameters_[e]; }

  /// Unit outward vertex normals.
  std::span<const Vec3> normals() const noexcept { return vertex_normals_; }
  /// Vertex area weights: mixed Voronoi areas (n = 3), half adjacent lengths (n = 2).
  const VectorX& vertex_areas() const noexcept { return vertex_areas_; }
  const CurvatureField& curvature() const noexcept { return curvature_; }

  /// Vertex one-ring: adjacent vertices and incident elements.
  std::span<const int> neighbors(std::size_t v) const;
  std::span<const int> incident_elements(std::size_t v) const;

  /// Connected components; component id per vertex and per element.
  int component_count() const noexcept { return components_; }
  std::span<const int> vertex_components() const noexcept { return vertex_component_; }
  std::span<const int> element_components() const noexcept { return element_component_; }

  double total_measure() const noexcept { return total_measure_; }
  double signed_volume() const noexcept { return volume_; }
  double max_edge_length() const noexcept { return max_edge_; }
  double min_edge_length() const noexcept { return min_edge_; }
  double mean_edge_length() const noexcept { return mean_edge_; }

  /// Unique undirected edges (n = 3); for n = 2 identical to the segments.
  const std::vector<std::array<int, 2>>& edges() const noexcept { return edges_; }

private:
  Boundary() = default;
  void build(const BoundaryOptions& opts);

  int dim_ = 3;
  std::vector<Vec3> points_;
  std::vector<Element> elements_;
  BoundaryOptions opts_;

  std::vector<Vec3> element_normals_;
  std::vector<double> element_measures_;
  std::vector<double> element_diameters_;
  std::vector<Vec3> vertex_normals_;
  VectorX vertex_areas_;
  CurvatureField curvature_;

  std::vector<int> ring_offsets_, ring_vertices_;
  std::vector<int> star_offsets_, star_elements_;
  std::vector<std::array<int, 2>> edges_;

  int components_ = 0;
  std::vector<int> vertex_component_, element_component_;

  double total_measure_ = 0.0;
  double volume_ = 0.0;
  double max_edge_ = 0.0, min_edge_ = 0.0, mean_edge_ = 0.0;

  friend CurvatureField compute_curvature(const Boundary&);
};

/// Curvature estimation used at construction: cotangent mean-curvature normal
/// with mixed areas and a one-ring shape-operator fit (n = 3); circumscribed
/// circles (n = 2). Exposed for re-evaluation in tests.
CurvatureField compute_curvature(const Boundary& b);

}  // namespace gamow
