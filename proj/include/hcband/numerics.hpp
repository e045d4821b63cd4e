#ifndef HCBAND_NUMERICS_HPP
#define HCBAND_NUMERICS_HPP

#include <utility>
#include <vector>

#include "hcband/types.hpp"

namespace hcband {

// Result of a Hermitian (generalized) eigensolve: values ascending,
// vectors B-orthonormal columns (V* B V = I).
struct HermitianEig {
  RVec values;
  Mat vectors;
};

// Eigendecomposition of a Hermitian matrix, values ascending, vectors
// unitary (empty when with_vectors is false). The tridiagonal QL solver
// occasionally exhausts its sweep budget on large strongly clustered
// spectra (seen for dilute inclusions around dimension 1500); this falls
// back to the unconditionally convergent Schur route, whose form is
// diagonal for Hermitian input.
HermitianEig hermitian_eig(const Mat& A, bool with_vectors = true);

// Solves A V = B V diag(values) for Hermitian A and Hermitian
// positive-definite B, reducing to standard form through a Cholesky
// factorization of B. Per-pair residuals are checked against
// residual_tol * ||A||_F and a violation throws numerical_error.
HermitianEig hermitian_generalized_eig(const Mat& A, const Mat& B,
                                       double residual_tol = 1e-10);

// Same contract with diagonal B (entries > 0); the reduction is then an
// exact diagonal scaling, which is both faster and better conditioned.
HermitianEig hermitian_generalized_eig(const Mat& A, const RVec& B_diag,
                                       double residual_tol = 1e-10);

// Eigenvalues of a general complex matrix (unsorted, as returned by the
// backward-stable Schur-based solver).
CVec general_eig(const Mat& A);

struct GeneralEig {
  CVec values;
  Mat vectors;
};

// Eigenvalues and right eigenvectors of a general complex matrix.
GeneralEig general_eig_full(const Mat& A);

// Determinant through partial-pivoting LU.
Complex determinant(const Mat& A);

// Spectral norm (largest singular value).
double operator_norm(const Mat& A);

// One trapezoid node on a circular contour. Weights are folded so that
// sum_j weight_j * f(zeta_j) approximates -(1/(2*pi*i)) * contour integral
// of f. With the resolvent orientation f(zeta) = 1/(a - zeta) the discrete
// sum is exactly 1/(1 - u^M), u = (a - center)/radius: +1 at the center,
// and converging to +1 (a inside) or 0 (a outside) at the geometric rate
// |u|^M. Choose M against the closest approach of a pole to the circle.
struct ContourNode {
  Complex zeta;
  Complex weight;
};

std::vector<ContourNode> contour_nodes(Complex center, double radius, int M);

// Bisection root finding; pre: f(lo) and f(hi) have opposite signs.
template <class Fn>
double bisect(Fn&& f, double lo, double hi, double tol = 1e-13,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw numerical_error("bisect: no sign change on [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
  for (int it = 0; it < max_iter && (hi - lo) > tol * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hcband

#endif  // HCBAND_NUMERICS_HPP
