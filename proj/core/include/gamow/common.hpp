#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gamow {

using Vec3 = Eigen::Vector3d;
using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user input was violated (bad spec, bad option, bad file).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// The requested combination is outside what the library implements.
class Unsupported : public Error {
public:
  using Error::Error;
};

/// Discrete geometry is unusable; `vertices()` names the offending ids when known.
class GeometryError : public Error {
public:
  explicit GeometryError(const std::string& what, std::vector<int> ids = {})
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<int>& vertices() const noexcept { return ids_; }

private:
  std::vector<int> ids_;
};

/// An iterative procedure failed (eigensolve, flow stall, mesh collapse).
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what, int iterations = -1)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

private:
  int iterations_;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Surface measure of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

}  // namespace gamow
