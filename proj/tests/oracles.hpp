#ifndef HCBAND_TESTS_ORACLES_HPP
#define HCBAND_TESTS_ORACLES_HPP

#include <cmath>
#include <vector>

#include "hcband/basis.hpp"
#include "hcband/geometry.hpp"
#include "hcband/types.hpp"

// Slow, independent reference computations for the tests: plain quadrature
// where the library uses closed forms, and full eigensolves where the
// library uses contour integrals.
namespace oracles {

using hcband::Complex;
using hcband::Vec3;

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// three-term recurrence.
inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      deriv = n * (t * p0 - p1) / (t * t - 1.0);
      const double step = p0 / deriv;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[static_cast<size_t>(i)] = -t;
    x[static_cast<size_t>(n - 1 - i)] = t;
    w[static_cast<size_t>(i)] = w[static_cast<size_t>(n - 1 - i)] =
        2.0 / ((1.0 - t * t) * deriv * deriv);
  }
}

// Integral of e^{i q.x} over the ball |x - c| <= r by spherical product
// quadrature: radial and polar Gauss-Legendre, azimuthal trapezoid.
inline Complex ball_exp_integral(const hcband::Sphere& s, const Vec3& q,
                                 int n = 24) {
  std::vector<double> xr, wr, xc, wc;
  gauss_legendre(n, xr, wr);
  gauss_legendre(n, xc, wc);
  const int nphi = 2 * n;
  Complex total = 0.0;
  for (int a = 0; a < n; ++a) {
    const double rho = 0.5 * s.radius * (xr[static_cast<size_t>(a)] + 1.0);
    const double wrho =
        0.5 * s.radius * wr[static_cast<size_t>(a)] * rho * rho;
    for (int b = 0; b < n; ++b) {
      const double ct = xc[static_cast<size_t>(b)];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int p = 0; p < nphi; ++p) {
        const double phi = 2.0 * M_PI * p / nphi;
        const Vec3 y(rho * st * std::cos(phi), rho * st * std::sin(phi),
                     rho * ct);
        const double phase = q.dot(s.center + y);
        total += wrho * wc[static_cast<size_t>(b)] * (2.0 * M_PI / nphi) *
                 Complex(std::cos(phase), std::sin(phase));
      }
    }
  }
  return total;
}

inline Complex shape_exp_integral(const hcband::InclusionShape& shape,
                                  const Vec3& q, int n = 24) {
  Complex total = 0.0;
  for (const hcband::Sphere& s : shape.spheres)
    total += ball_exp_integral(s, q, n);
  return total;
}

// Component `axis` of the cell-edge average: Gauss-Legendre line integral
// of u_axis along x_axis in [0, 1], the other coordinates held at delta.
inline Complex segment_average(const hcband::RawVectorField& u, int axis,
                               double delta, int n = 64) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  Complex total = 0.0;
  for (int a = 0; a < n; ++a) {
    const double t = 0.5 * (x[static_cast<size_t>(a)] + 1.0);
    Vec3 pos(delta, delta, delta);
    pos[axis] = t;
    Complex value = 0.0;
    for (const auto& [m, h] : u.fourier) {
      const Vec3 kappa =
          2.0 * M_PI * Vec3(m[0], m[1], m[2]) + u.quasimomentum.alpha;
      const double phase = kappa.dot(pos);
      value += h[axis] * Complex(std::cos(phase), std::sin(phase));
    }
    total += 0.5 * w[static_cast<size_t>(a)] * value;
  }
  return total;
}

// Mean of the eigenvalues of A inside the disk |lambda - beta0| < d, from
// a full eigensolve; the contour-free reference for the weighted mean.
inline Complex eigencluster_mean(const hcband::Mat& A, double beta0,
                                 double d) {
  Eigen::ComplexEigenSolver<hcband::Mat> es(A, false);
  Complex sum = 0.0;
  int count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()[i];
    if (std::abs(lam - beta0) < d) {
      sum += lam;
      ++count;
    }
  }
  return count > 0 ? sum / double(count) : Complex(0.0);
}

}  // namespace oracles

#endif  // HCBAND_TESTS_ORACLES_HPP
