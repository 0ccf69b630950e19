#pragma once

#include "gamow/boundary.hpp"

namespace gamow {

/// P(E): total (n-1)-measure of the boundary.
double perimeter(const Boundary& b);

/// |E| by the divergence theorem. Throws GeometryError when nonpositive.
double volume(const Boundary& b);

/// Volume centroid of E.
Vec3 centroid(const Boundary& b);

/// Largest pairwise vertex distance.
double diameter(const Boundary& b);

/// Symmetric Hausdorff distance between the vertex sets.
double hausdorff_distance(const Boundary& a, const Boundary& b);

/// Distance from x to the nearest boundary vertex.
double distance_to_vertices(const Boundary& b, const Vec3& x);

/// Element quality in [0, 1]: 1 for equilateral triangles, 4 sqrt(3) A / sum l^2.
/// Segments score min/max length of the two neighbours they touch.
double min_element_quality(const Boundary& b);

/// Radius of the ball whose volume equals |E|.
double volume_equivalent_radius(const Boundary& b);

/// Perimeter of the ball of equal volume: the isoperimetric lower bound.
double isoperimetric_bound(const Boundary& b);

}  // namespace gamow
