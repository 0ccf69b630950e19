#include <cmath>
#include <vector>

#include "gamow/flow.hpp"

namespace gamow {

double annulus_potential(double outer, double inner, double r) {
  const double R = outer, p = inner;
  if (!(R > p && p > 0.0)) throw InvalidInput("annulus radii must satisfy 0 < inner < outer");
  if (r < 0.0) throw InvalidInput("radius must be nonnegative");
  if (r <= p) return 0.5 * (R * R - p * p);
  if (r <= R) return 0.5 * R * R - p * p * p / (3.0 * r) - r * r / 6.0;
  return (R * R * R - p * p * p) / (3.0 * r);
}

namespace {

struct Radii {
  double outer, inner;
};

Radii radii_from_fraction(double t, double volume) {
  // |E| = 4pi/3 R^3 (1 - t^3)
  const double R = std::cbrt(3.0 * volume / (4.0 * pi * (1.0 - t * t * t)));
  return {R, t * R};
}

// (H + 2 gamma v) on the outer sphere minus the same on the inner sphere.
double mismatch(double gamma, const Radii& r) {
  const double R = r.outer, p = r.inner;
  const double outer = 2.0 / R + 2.0 * gamma * (R * R * R - p * p * p) / (3.0 * R);
  const double inner = -2.0 / p + 2.0 * gamma * 0.5 * (R * R - p * p);
  return outer - inner;
}

}  // namespace

AnnulusResult annulus_critical(double gamma, double target_volume) {
  if (!(gamma > 0.0)) throw InvalidInput("annulus_critical needs gamma > 0");
  if (!(target_volume > 0.0)) throw InvalidInput("target volume must be positive");

  auto f = [&](double t) { return mismatch(gamma, radii_from_fraction(t, target_volume)); };

  // Geometric grid in t = inner / outer; f -> +inf at both ends.
  const int samples = 4000;
  const double t_min = 1e-6, t_max = 1.0 - 1e-9;
  std::vector<double> grid(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double s = static_cast<double>(i) / samples;
    grid[i] = t_min * std::pow(t_max / t_min, s);
  }

  AnnulusResult out;
  double root = -1.0;
  double prev = f(grid[0]);
  for (int i = 1; i <= samples; ++i) {
    const double cur = f(grid[i]);
    if ((prev > 0.0) != (cur > 0.0)) {
      ++out.roots_found;
      if (root < 0.0) {
        double a = grid[i - 1], b = grid[i], fa = prev;
        for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = f(m);
          if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        root = 0.5 * (a + b);
      }
    }
    prev = cur;
  }

  if (root < 0.0) {
    out.message = "no critical annulus at this gamma";
    return out;
  }
  const Radii r = radii_from_fraction(root, target_volume);
  out.exists = true;
  out.outer = r.outer;
  out.inner = r.inner;
  out.lambda = 2.0 / r.outer + 2.0 * gamma * annulus_potential(r.outer, r.inner, r.outer);
  out.residual = std::abs(mismatch(gamma, r));
  return out;
}

}  // namespace gamow
