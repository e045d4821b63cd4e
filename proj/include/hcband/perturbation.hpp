#ifndef HCBAND_PERTURBATION_HPP
#define HCBAND_PERTURBATION_HPP

#include <cstdint>
#include <vector>

#include "hcband/operators.hpp"
#include "hcband/quasistatic.hpp"
#include "hcband/types.hpp"

namespace hcband {

// Distinct eigenvalue clusters of A(0), ascending, zero cluster included.
struct SpectrumA0 {
  std::vector<double> values;
  std::vector<int> multiplicities;
};

// Clusters the eigenvalues of A(0) = Psi_W2 Psi_W2^* with an absolute gap
// tolerance. The nonzero part is computed as the spectrum of the small
// W2 Gram Psi_W2^* Psi_W2, the zero eigenvalue carries the remaining
// multiplicity.
SpectrumA0 spectrum_A0(const StructuralSpectrum& snapped,
                       double tol_cluster = 1e-9);

// An isolated eigenvalue group of A(0) with the circular contour used for
// its Riesz projection: center beta0, radius d = min over the half-gaps to
// every other cluster (the zero cluster gives beta0 / 2).
struct EigenvalueGroup {
  int index = 0;  // 1-based, counted downward from the largest eigenvalue
  double beta0 = 0.0;
  int multiplicity = 0;
  double d = 0.0;
};

// Selects the group_index-th nonzero cluster from the top. Throws
// selection_error when the index is out of range.
EigenvalueGroup choose_contour(const SpectrumA0& spectrum, int group_index);

// (A - zeta I)^{-1} through partial-pivoting LU with a residual check
// ||(A - zeta)X - I||_F <= residual_tol * ||A - zeta||_F ||X||_F.
Mat resolvent(const Mat& A, Complex zeta, double residual_tol = 1e-10);

// Eigendecomposition of A(z) at one evaluation point, reused by the
// projection, the weighted mean and the contour diagnostics. For real z
// the matrix is Hermitian and the vectors are unitary.
struct FamilyEig {
  Complex z;
  CVec values;
  Mat vectors;
  bool hermitian = false;
};

// with_vectors = false skips the eigenvector computation; enough for the
// weighted mean and the contour diagnostics.
FamilyEig evaluate_A(const StructuralSpectrum& spec, Complex z,
                     bool with_vectors = true);

// Standard certificate sampling: 8 angles times radii
// {0.25, 0.5, 0.75, 0.9} r*.
std::vector<Complex> certificate_grid(double r_star);

// Smallest distance between an eigenvalue of A(z) and the contour circle.
double contour_margin(const FamilyEig& eig, const EigenvalueGroup& group);

// Riesz projection -(1/(2 pi i)) contour integral of (A(z) - zeta)^{-1}
// by M-node trapezoid quadrature, evaluated in the eigenbasis of A(z).
// Post: ||P^2 - P||_F <= 1e-8 and |tr P - m| <= 1e-8, otherwise throws
// numerical_error suggesting a larger M.
Mat projection_P(const FamilyEig& eig, const EigenvalueGroup& group,
                 int M = 64);
Mat projection_P(const StructuralSpectrum& spec, Complex z,
                 const EigenvalueGroup& group, int M = 64);

// Same projection assembled from LU resolvents at the quadrature nodes;
// slower, kept as an independent route for cross-validation.
Mat projection_P_lu(const Mat& A_z, const EigenvalueGroup& group, int M = 64);

// Weighted mean of the eigenvalue group of A(z),
// beta0 + (1/m) tr[(A(z) - beta0) P(z)], through the contour trace
// identity; needs only the eigenvalues of A(z).
Complex weighted_mean(const FamilyEig& eig, const EigenvalueGroup& group,
                      int M = 64);
Complex weighted_mean(const StructuralSpectrum& spec, Complex z,
                      const EigenvalueGroup& group, int M = 64);

// Certified convergence radius of the group power series,
//   r* = a d |z*| / (1/(1/2 - mu_minus) + a d),
// where a = |alpha|^2 for nonzero quasimomentum and (2 pi)^2 at alpha = 0
// (the reciprocal of the discrete Poincare constant). Requires
// mu_minus in (-1/2, 0).
double radius_r_star(const QuasiMomentum& alpha, double d, double mu_minus);

// Tail bound for the truncated series: |beta_hat(z) - sum_{n<=p} beta_n z^n|
// <= d |z|^{p+1} / ((r*)^p (r* - |z|)), valid for |z| < r*.
double error_bound(int p, Complex z, double d, double r_star);

// Norm bound for the family increment on the real segment (z*, 0):
// ||A(z) - A(0)|| <= |z| / (a (1/2 - mu_minus) (|z*| - |z|)).
double a_family_shift_bound(const QuasiMomentum& alpha, double mu_minus,
                            double z);

// Power-series coefficients beta_0..beta_p of the weighted mean around
// z = 0 by the trace composition formula
//   beta_n = (1/(2 pi i m)) sum_p ((-1)^p / p)
//            sum_{k_1+..+k_p = n} contour tr[A_{k_1} R_0 ... A_{k_p} R_0],
// cross-checked against Cauchy extraction of beta_hat on |z| = r*/2.
struct SeriesExpansion {
  EigenvalueGroup group;
  std::vector<double> coeffs;  // beta_0 .. beta_p
  double r_star = 0.0;
  double z_star = 0.0;
  double cauchy_deviation = 0.0;   // worst relative cross-check deviation
  double imag_residue = 0.0;       // largest |Im| seen in a coefficient
  bool cauchy_bounds_ok = false;   // |beta_n| <= d (r*)^{-n} for all n
};

SeriesExpansion series_coefficients(const StructuralSpectrum& snapped,
                                    const EigenvalueGroup& group, int p_max,
                                    int M = 64, bool cross_check = true);

// Separation diagnostics of the group on a set of evaluation points.
struct SeparationSample {
  Complex z;
  bool contour_clear = false;
  double margin = 0.0;
  double idempotency = 0.0;
  double trace_deviation = 0.0;
  bool pass = false;
};

struct SeparationReport {
  std::vector<SeparationSample> samples;
  bool all_pass = false;
};

SeparationReport verify_separation(const StructuralSpectrum& snapped,
                                   const EigenvalueGroup& group,
                                   const std::vector<Complex>& zs, int M = 64);

// Synthetic snapped spectrum with prescribed interior mu values, W1/W2
// dimensions, identity K_Y and a Haar-random unitary Psi; exercises the
// perturbation stack away from any particular geometry.
StructuralSpectrum build_synthetic_family(const std::vector<double>& mu_w3,
                                          int n_w1, int n_w2,
                                          std::uint64_t seed);

}  // namespace hcband

#endif  // HCBAND_PERTURBATION_HPP
