#ifndef HCBAND_OPERATORS_HPP
#define HCBAND_OPERATORS_HPP

#include "hcband/quasistatic.hpp"
#include "hcband/types.hpp"

namespace hcband {

// Galerkin matrix of the two-phase curl-curl form at contrast k,
// M_k = k (K_Y - K_D) + K_D, assembled directly from the Gram pair.
Mat assemble_Bk_direct(const GramPair& gram, Complex k);

// The same matrix rebuilt from the structural eigenpairs:
// K_Y Psi diag(k (1 - lambda) + lambda) Psi^* K_Y.
Mat reconstruct_Bk_spectral(const StructuralSpectrum& spec, Complex k);

// Scalar symbol of the inverse family: rho(z) = z / ((1 - lambda) + z lambda),
// the eigenvalue A(z) carries on a structural eigenvector with the given
// lambda. Specializes to z on lambda = 0 and to 1 on lambda = 1.
Complex rho_of_z(double lambda, Complex z);

// A(z) = Psi diag(rho(lambda_i, z)) Psi^*, the inverse of M_{1/k} at
// z = 1/k written as an analytic family through z = 0. Throws
// numerical_error when z sits on a pole (1 - lambda) + z lambda = 0,
// naming the resonance index.
Mat A_of_z(const StructuralSpectrum& spec, Complex z);

// Eigenvalues xi of the Bloch form at contrast k, i.e. of M_k in the
// L2-orthonormal basis. `frequencies` carries sqrt(xi) when the spectrum
// is real and nonnegative (real k), otherwise stays empty.
struct BlochSpectrum {
  QuasiMomentum alpha;
  Complex k;
  CVec xi;          // sorted by (Re, Im)
  RVec frequencies; // sqrt(xi) for real spectra
};

// Direct route: standard eigenvalues of the assembled M_k. Rejects k in
// the excluded contrast set (detected through a vanishing eigenvalue).
BlochSpectrum bloch_eigenvalues(const GramPair& gram, Complex k);

// Spectral route: reciprocals of the eigenvalues of the assembled matrix
// A(1/k). Rejects k within 1e-10 * (1 + |k|) of the excluded set
// Z = {(mu - 1/2)/(mu + 1/2)}.
BlochSpectrum bloch_eigenvalues(const StructuralSpectrum& spec, Complex k);

// n-th Taylor coefficient matrix of z -> A(z) at z = 0 for a snapped
// spectrum: Psi diag(c_n) Psi^* with
//   c_1 = 1 on W1, 1/(mu + 1/2) on W3, 0 on W2,
//   c_n = ((mu - 1/2)/(mu + 1/2))^(n-1) / (mu + 1/2) on W3 (n >= 2), else 0.
Mat a_n_matrix(const StructuralSpectrum& snapped, int n);

}  // namespace hcband

#endif  // HCBAND_OPERATORS_HPP
