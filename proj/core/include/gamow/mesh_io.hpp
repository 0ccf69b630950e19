#pragma once

#include <iosfwd>
#include <string>

#include "gamow/boundary.hpp"

namespace gamow {

/// ASCII OFF triangle mesh (n = 3). Polygons with more than three corners are
/// rejected; comments (#) and blank lines are skipped.
Boundary read_off(std::istream& in);
Boundary read_off_file(const std::string& path);
void write_off(std::ostream& out, const Boundary& b);

/// CSV vertex loop (n = 2): rows "x,y" or "x,y,loop", optional header row.
/// Consecutive rows with the same loop id form one closed counter-clockwise
/// (outer) or clockwise (hole) loop, closed back to its first row.
Boundary read_curve_csv(std::istream& in);
Boundary read_curve_csv_file(const std::string& path);
void write_curve_csv(std::ostream& out, const Boundary& b);

/// Dispatches on extension: .off -> surface, .csv -> curve.
Boundary read_boundary_file(const std::string& path);
void write_boundary_file(const std::string& path, const Boundary& b);

}  // namespace gamow
