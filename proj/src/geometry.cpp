#include "hcband/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hcband {

void validate_shape(const InclusionShape& shape) {
  if (shape.spheres.empty())
    throw geometry_error("inclusion shape needs at least one sphere");
  for (size_t j = 0; j < shape.spheres.size(); ++j) {
    const Sphere& s = shape.spheres[j];
    if (!(s.radius > 0.0))
      throw geometry_error("sphere radius must be positive");
    for (int d = 0; d < 3; ++d)
      if (!(s.center[d] - s.radius > 0.0 && s.center[d] + s.radius < 1.0))
        throw geometry_error("sphere not strictly inside cell");
    for (size_t i = 0; i < j; ++i) {
      const Sphere& t = shape.spheres[i];
      if (!((s.center - t.center).norm() > s.radius + t.radius))
        throw geometry_error("spheres overlap or touch");
    }
  }
}

void validate_buffered(const BufferedGeometry& geom) {
  if (!(geom.a > 0.0 && geom.a < geom.b && geom.b < 0.5))
    throw geometry_error("buffered geometry requires 0 < a < b < 1/2");
}

namespace {

// Radial factor of the ball indicator transform.
double sphere_form_factor(double r, double q) {
  const double vol = 4.0 * M_PI * r * r * r / 3.0;
  if (q == 0.0) return vol;
  const double t = 2.0 * M_PI * q * r;
  return 3.0 * vol * (std::sin(t) - t * std::cos(t)) / (t * t * t);
}

}  // namespace

Complex indicator_fourier(const InclusionShape& shape, const Vec3i& m) {
  const double q = m.cast<double>().norm();
  Complex sum = 0.0;
  for (const Sphere& s : shape.spheres) {
    const double phase = -2.0 * M_PI * m.cast<double>().dot(s.center);
    sum += std::polar(sphere_form_factor(s.radius, q), phase);
  }
  return sum;
}

ThetaResult theta_buffered_sphere(const BufferedGeometry& geom, int L_max) {
  // The C_l ratios are scale invariant, so the scan accepts any 0 < a < b
  // (rescaled units); cell containment is checked at config ingestion.
  if (!(geom.a > 0.0 && geom.a < geom.b))
    throw geometry_error("buffered geometry requires 0 < a < b");
  if (L_max < 1) throw std::invalid_argument("theta_buffered_sphere: L_max >= 1");
  ThetaResult out;
  // The supremum over l includes the limiting value 1 (C_l -> 1 from below
  // when a/b is small, so the max over any finite scan can undershoot it).
  out.theta_inv = 1.0;
  out.l_at_max = -1;
  for (int l = 1; l <= L_max; ++l) {
    const double c = c_l_coefficient(geom.a, geom.b, l);
    if (c > out.theta_inv) {
      out.theta_inv = c;
      out.l_at_max = l;
    }
  }
  out.theta = 1.0 / out.theta_inv;
  const double a3 = geom.a * geom.a * geom.a;
  const double b3 = geom.b * geom.b * geom.b;
  out.coarse_bound = (b3 + a3) / (b3 - a3);
  if (out.theta_inv > out.coarse_bound + 1e-12)
    throw numerical_error("theta bound exceeded its closed-form majorant");
  return out;
}

double mu_minus_from_theta(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  return std::min(0.5, 0.5 * theta) - 0.5;
}

double z_star(double mu_minus) {
  if (!(mu_minus < 0.5))
    throw std::invalid_argument("z_star: mu_minus must be below 1/2");
  return (mu_minus + 0.5) / (mu_minus - 0.5);
}

}  // namespace hcband
