#ifndef HCBAND_BASIS_HPP
#define HCBAND_BASIS_HPP

#include <array>
#include <map>
#include <vector>

#include "hcband/geometry.hpp"
#include "hcband/types.hpp"

namespace hcband {

// Bloch quasi-momentum, components in (-pi, pi].
struct QuasiMomentum {
  Vec3 alpha = Vec3::Zero();

  bool is_zero() const { return alpha.isZero(0.0); }
};

// Throws unless every component lies in (-pi, pi].
void validate_quasimomentum(const QuasiMomentum& q);

// One divergence-free plane wave e_hat * exp(i kappa.x), kappa = 2 pi n + alpha,
// with e_hat one of the two unit polarizations orthogonal to kappa.
struct BasisElement {
  Vec3i n;
  int pol = 1;  // 1 or 2
  Vec3 kappa;
  Vec3 e_hat;
};

// The Galerkin basis: all |n|_inf <= N, two polarizations per n, ordered
// lexicographically in (n1, n2, n3, pol). For alpha = 0 the n = 0 pair is
// excluded (fields are mean-zero), so the count is 2((2N+1)^3 - 1) instead
// of 2(2N+1)^3. Immutable after construction.
struct PlaneWaveBasis {
  QuasiMomentum quasimomentum;
  int cutoff = 0;
  std::vector<BasisElement> elements;

  int size() const { return static_cast<int>(elements.size()); }
};

PlaneWaveBasis build_basis(const QuasiMomentum& alpha, int N);

// Coefficients of a field in the span of a PlaneWaveBasis. The represented
// field is automatically divergence-free and alpha-quasiperiodic.
struct FieldCoefficients {
  const PlaneWaveBasis* basis = nullptr;
  CVec coeffs;
};

// A general (not necessarily divergence-free) trigonometric vector field
// h(x) = sum_n h_hat(n) exp(i (2 pi n + alpha).x) with finite support.
struct RawVectorField {
  QuasiMomentum quasimomentum;
  std::map<std::array<int, 3>, CVec3> fourier;
};

RawVectorField to_raw(const FieldCoefficients& field);

// L2(Y) norm; the basis is L2-orthonormal so this is the coefficient norm.
double l2_norm(const FieldCoefficients& field);

// Curl norm ||curl u||_{L2}; per mode |kappa x .| contributes |kappa|^2 |c|^2
// for transverse polarizations.
double curl_norm(const FieldCoefficients& field);

// Energy inner product <u,v> = integral of curl u . conj(curl v).
Complex energy_inner(const FieldCoefficients& u, const FieldCoefficients& v);

// L2 inner product (u,v).
Complex l2_inner(const FieldCoefficients& u, const FieldCoefficients& v);

// Result of the Helmholtz splitting h = grad part + curl part (+ mean).
struct HelmholtzParts {
  RawVectorField pot;   // component parallel to kappa per mode
  RawVectorField curl;  // component orthogonal to kappa per mode
  CVec3 const_part = CVec3::Zero();  // the n = 0 coefficient when alpha = 0
};

// Splits each Fourier coefficient into its projections along and
// perpendicular to kappa = 2 pi n + alpha; the parts are L2-orthogonal and
// sum back to the input exactly. For alpha = 0 the n = 0 coefficient is the
// constant part.
HelmholtzParts helmholtz_decompose(const RawVectorField& field);

// Diagonal Fourier symbol of the quasiperiodic Green operator:
// -1/|2 pi n + alpha|^2. The zero wavevector (alpha = 0, n = 0) is rejected.
double greens_multiplier(const QuasiMomentum& alpha, const Vec3i& n);

// (-Laplace)^{-1} on the divergence-free span: coefficient-wise 1/|kappa|^2.
FieldCoefficients inverse_laplacian(const FieldCoefficients& field);

// Geometric average for alpha = 0: component i is the line integral of
// u . e_i along the cell-edge segment in direction i offset by delta = 1e-6
// in the other two coordinates. Closed form: a mode contributes only when
// its index along the path direction vanishes. Throws geometry_error when a
// path meets the inclusion.
CVec3 geometric_average(const RawVectorField& field,
                        const InclusionShape& shape);
CVec3 geometric_average(const FieldCoefficients& field,
                        const InclusionShape& shape);

inline constexpr double geometric_average_offset = 1e-6;

}  // namespace hcband

#endif  // HCBAND_BASIS_HPP
