#ifndef HCBAND_QUASISTATIC_HPP
#define HCBAND_QUASISTATIC_HPP

#include <string>
#include <vector>

#include "hcband/basis.hpp"
#include "hcband/geometry.hpp"
#include "hcband/types.hpp"

namespace hcband {

// Curl-curl Gram matrices of the Galerkin basis: K_Y over the full cell
// (diagonal, entries |kappa_m|^2) and K_D over the inclusion phase D.
// K_D(m, m') equals the direct integral over D of
// (curl phi_m) . conj(curl phi_m'), which reduces to
// (kappa_m x e_m).(kappa_m' x e_m') * chi_hat_D(n_m' - n_m).
struct GramPair {
  QuasiMomentum alpha;
  RVec K_Y;  // diagonal entries
  Mat K_D;
};

GramPair assemble_gram(const PlaneWaveBasis& basis, const InclusionShape& shape);

// Index classification of the structural spectrum into the curl-free-in-D
// block (w1, lambda near 0), curl-free-in-host block (w2, lambda near 1)
// and the interior resonances (w3).
struct SubspaceSplit {
  std::vector<int> w1, w2, w3;
  double delta_snap = 0.0;
  // Smallest distance from the W3 lambdas to the snapped clusters; lets the
  // caller judge whether the threshold cut through a cluster.
  double gap_w1 = 0.0;
  double gap_w2 = 0.0;
  std::vector<std::string> warnings;
};

// Eigenpairs of the pencil K_D Psi = K_Y Psi diag(lambda): the
// contrast-independent structural spectrum of the geometry for one alpha.
// mu = 1/2 - lambda; Psi is K_Y-orthonormal. After snapping, lambda holds
// exact 0/1 entries on w1/w2 and mu_minus/mu_plus bound the W3 mu range.
struct StructuralSpectrum {
  QuasiMomentum alpha;
  RVec lambdas;  // ascending
  RVec mus;      // 1/2 - lambda
  Mat Psi;
  RVec K_Y;
  bool snapped = false;
  SubspaceSplit split;
  double mu_minus = 0.0;
  double mu_plus = 0.0;
};

StructuralSpectrum solve_structural(const GramPair& gram,
                                    double residual_tol = 1e-10);

// Classifies and end-snaps a structural spectrum: lambda < delta becomes
// exactly 0 (w1), lambda > 1 - delta becomes exactly 1 (w2). The returned
// spectrum is the exact finite model on which the representation, series
// and radius results hold verbatim.
StructuralSpectrum snap_spectrum(const StructuralSpectrum& spec,
                                 double delta_snap);

// Poles of the operator family z -> A(z) on the negative real axis,
// z_i = (mu_i + 1/2)/(mu_i - 1/2) over the interior indices, sorted
// ascending, and their maximum z* (the pole closest to the origin).
struct PoleSet {
  std::vector<double> S;
  double z_star_alpha = 0.0;
};

PoleSet pole_set(const StructuralSpectrum& snapped);

}  // namespace hcband

#endif  // HCBAND_QUASISTATIC_HPP
