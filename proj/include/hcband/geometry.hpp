#ifndef HCBAND_GEOMETRY_HPP
#define HCBAND_GEOMETRY_HPP

#include <vector>

#include "hcband/types.hpp"

namespace hcband {

// A single spherical inclusion, strictly inside the open unit cell (0,1)^3.
struct Sphere {
  Vec3 center;
  double radius = 0.0;
};

// The inclusion phase D: a disjoint union of spheres. Spheres keep the
// indicator's Fourier data in closed form, so the quasi-static assembly is
// exact up to rounding.
struct InclusionShape {
  std::vector<Sphere> spheres;
};

// Concentric inclusion/buffer pair used by the closed-form lower bound on
// the interior spectrum: inclusion radius a, host buffer radius b.
struct BufferedGeometry {
  double a = 0.0;
  double b = 0.0;
};

// Throws geometry_error unless every closed ball lies strictly inside the
// open cell and the balls are pairwise disjoint with positive separation.
void validate_shape(const InclusionShape& shape);

// Throws geometry_error unless 0 < a < b < 1/2.
void validate_buffered(const BufferedGeometry& geom);

// Fourier coefficient of the inclusion indicator,
//   chi_hat_D(m) = integral over D of e^{-2 pi i m.x} dx
//               = sum_j e^{-2 pi i m.c_j} s(r_j, |m|),
// with s(r, 0) = 4 pi r^3 / 3 and
// s(r, q) = 3 (4 pi r^3 / 3) (sin t - t cos t) / t^3, t = 2 pi q r.
Complex indicator_fourier(const InclusionShape& shape, const Vec3i& m);

// Buffered-sphere constant C_l(a,b); the scalar type is generic because the
// formula is used both on raw radii and on rescaled test values.
template <class T>
T c_l_coefficient(T a, T b, int l) {
  const T ap = std::pow(a, T(2 * l + 1));
  const T bp = std::pow(b, T(2 * l + 1));
  return (T(l) * bp + T(l + 1) * ap) / (T(l + 1) * (bp - ap));
}

// Non-increasing majorant C_l*(a,b) = (b^{2l+1}+a^{2l+1})/(b^{2l+1}-a^{2l+1}).
template <class T>
T c_l_majorant(T a, T b, int l) {
  const T ap = std::pow(a, T(2 * l + 1));
  const T bp = std::pow(b, T(2 * l + 1));
  return (bp + ap) / (bp - ap);
}

struct ThetaResult {
  double theta = 0.0;
  double theta_inv = 0.0;
  // l achieving the max, or -1 when the supremum is the l -> infinity limit 1.
  int l_at_max = -1;
  // The coarse closed-form majorant (b^3+a^3)/(b^3-a^3) reported alongside.
  double coarse_bound = 0.0;
};

// theta for the buffered sphere: theta_inv = max(1, max_{1<=l<=L_max} C_l),
// where the value 1 is included because C_l -> 1 as l -> infinity and the
// supremum may be attained only in that limit.
ThetaResult theta_buffered_sphere(const BufferedGeometry& geom, int L_max = 64);

// Lower bound on the interior spectrum from theta: mu_minus = min(1/2, theta/2) - 1/2.
double mu_minus_from_theta(double theta);

// z*(mu_minus) = (mu_minus + 1/2)/(mu_minus - 1/2); requires mu_minus < 1/2.
double z_star(double mu_minus);

}  // namespace hcband

#endif  // HCBAND_GEOMETRY_HPP
