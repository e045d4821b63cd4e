#ifndef HCBAND_PERIODIC_LIMIT_HPP
#define HCBAND_PERIODIC_LIMIT_HPP

#include <vector>

#include "hcband/basis.hpp"
#include "hcband/geometry.hpp"
#include "hcband/quasistatic.hpp"
#include "hcband/types.hpp"

namespace hcband {

// Span of the periodic curl-free-in-host resonant fields u = w - avg(w),
// with w running over the snapped W2 modes at alpha = 0. Columns of
// w2_coeffs hold the plane-wave coefficients of the w, consts the constant
// offsets -avg(w) obtained from the geometric average over paths through
// the host phase.
struct ChiDivSpace {
  Mat w2_coeffs;             // dim x q
  Eigen::Matrix3Xcd consts;  // 3 x q
  RVec K_Y;
  int size() const { return static_cast<int>(w2_coeffs.cols()); }
};

ChiDivSpace build_chi_div(const StructuralSpectrum& snapped,
                          const PlaneWaveBasis& basis,
                          const InclusionShape& shape);

// Eigenpairs of the periodic resonance problem
// (u, v)_{L2} = beta <u, v>_{energy} on the chi-div space: betas positive
// descending, mode columns L2-orthonormal in the chi-div coordinates, and
// the cell averages (moments) of each mode.
struct ResonanceModes {
  RVec betas;
  Mat modes;                  // q x q
  Eigen::Matrix3Xcd moments;  // 3 x q
  std::vector<bool> zero_mean;
};

ResonanceModes solve_resonances(const ChiDivSpace& space,
                                double residual_tol = 1e-10,
                                double moment_tol = 1e-8);

// Effective magnetic permeability tensor
//   mu(nu) = I + nu * sum_n m_n m_n^* / (1/beta_n - nu)
// over the nonzero-mean modes. Rejects nu within 1e-10 (1 + |nu|) of a pole.
Mat3 effective_mu(const ResonanceModes& modes, double nu);

// S(nu) = det mu(nu); real for real nu.
double spectral_function(const ResonanceModes& modes, double nu);

// Poles 1/beta_n of the permeability (nonzero-mean modes only), distinct
// values ascending.
std::vector<double> mu_poles(const ResonanceModes& modes);

// Sign-change scan of S between consecutive poles (and up to twice the
// largest pole), refined by bisection.
struct RootScan {
  std::vector<double> poles;  // distinct, ascending
  std::vector<double> roots;  // ascending
  // Per interval (p_i, p_{i+1}), last entry for (p_max, 2 p_max].
  std::vector<int> roots_per_interval;
};

RootScan find_roots(const ResonanceModes& modes, int scan_points = 64);

// Compares the nonzero spectrum of A(0) at alpha = 0 against the union of
// the zero-mean resonance values and the reciprocals of the permeability
// roots, as a Hausdorff distance between the two value sets.
struct UnionCheck {
  double hausdorff = 0.0;
  int clusters_a0 = 0;
  int clusters_union = 0;
  bool pass = false;
};

UnionCheck spectrum_union_check(const StructuralSpectrum& snapped,
                                const ResonanceModes& modes,
                                double tol = 1e-6);

}  // namespace hcband

#endif  // HCBAND_PERIODIC_LIMIT_HPP
