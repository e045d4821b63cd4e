#include "hcband/periodic_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hcband/numerics.hpp"
#include "hcband/perturbation.hpp"

namespace hcband {

namespace {

std::vector<double> cluster_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  size_t i = 0;
  while (i < values.size()) {
    size_t j = i + 1;
    double sum = values[i];
    while (j < values.size() && values[j] - values[j - 1] <= tol) {
      sum += values[j];
      ++j;
    }
    out.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

double hausdorff_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  auto one_sided = [](const std::vector<double>& x,
                      const std::vector<double>& y) {
    double worst = 0.0;
    for (double v : x) {
      double best = std::numeric_limits<double>::infinity();
      for (double w : y) best = std::min(best, std::abs(v - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() || b.empty())
    return (a.empty() && b.empty())
               ? 0.0
               : std::numeric_limits<double>::infinity();
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

ChiDivSpace build_chi_div(const StructuralSpectrum& snapped,
                          const PlaneWaveBasis& basis,
                          const InclusionShape& shape) {
  if (!snapped.snapped)
    throw numerical_error("build_chi_div requires a snapped spectrum");
  if (!snapped.alpha.is_zero() || !basis.quasimomentum.is_zero())
    throw unsupported_error(
        "the periodic limit is defined at quasimomentum alpha = 0");
  if (basis.size() != snapped.lambdas.size())
    throw std::invalid_argument("basis does not match the spectrum dimension");

  const int q = static_cast<int>(snapped.split.w2.size());
  if (q == 0)
    throw numerical_error(
        "build_chi_div: the snapped spectrum has no W2 modes");

  ChiDivSpace space;
  space.K_Y = snapped.K_Y;
  space.w2_coeffs.resize(basis.size(), q);
  space.consts.resize(3, q);
  for (int j = 0; j < q; ++j) {
    space.w2_coeffs.col(j) = snapped.Psi.col(snapped.split.w2[j]);
    FieldCoefficients field{&basis, space.w2_coeffs.col(j)};
    space.consts.col(j) = -geometric_average(field, shape);
  }
  return space;
}

ResonanceModes solve_resonances(const ChiDivSpace& space, double residual_tol,
                                double moment_tol) {
  const int q = space.size();
  const Mat& W = space.w2_coeffs;
  const Mat energy = W.adjoint() * space.K_Y.cast<Complex>().asDiagonal() * W;
  const Mat l2 = W.adjoint() * W + space.consts.adjoint() * space.consts;

  HermitianEig eig = hermitian_generalized_eig(l2, energy, residual_tol);

  ResonanceModes modes;
  modes.betas.resize(q);
  modes.modes.resize(q, q);
  modes.moments.resize(3, q);
  modes.zero_mean.resize(static_cast<size_t>(q));
  for (int i = 0; i < q; ++i) {
    const int src = q - 1 - i;  // descending
    const double beta = eig.values[src];
    if (!(beta > 0.0))
      throw numerical_error("resonance value " + std::to_string(beta) +
                            " is not positive");
    modes.betas[i] = beta;
    // Energy-orthonormal eigenvector rescaled to unit L2 norm.
    modes.modes.col(i) = eig.vectors.col(src) / std::sqrt(beta);
    modes.moments.col(i) = space.consts * modes.modes.col(i);
    modes.zero_mean[static_cast<size_t>(i)] =
        modes.moments.col(i).norm() < moment_tol;
  }
  return modes;
}

Mat3 effective_mu(const ResonanceModes& modes, double nu) {
  Mat3 mu = Mat3::Identity();
  for (int n = 0; n < modes.betas.size(); ++n) {
    if (modes.zero_mean[static_cast<size_t>(n)]) continue;
    const double pole = 1.0 / modes.betas[n];
    if (std::abs(pole - nu) <= 1e-10 * (1.0 + std::abs(nu)))
      throw std::invalid_argument(
          "nu collides with the permeability pole at " + std::to_string(pole));
    const CVec3 m = modes.moments.col(n);
    mu += (nu / (pole - nu)) * (m * m.adjoint());
  }
  return mu;
}

double spectral_function(const ResonanceModes& modes, double nu) {
  const Complex det = determinant(Mat(effective_mu(modes, nu)));
  return det.real();
}

std::vector<double> mu_poles(const ResonanceModes& modes) {
  std::vector<double> poles;
  for (int n = 0; n < modes.betas.size(); ++n)
    if (!modes.zero_mean[static_cast<size_t>(n)])
      poles.push_back(1.0 / modes.betas[n]);
  std::sort(poles.begin(), poles.end());
  std::vector<double> distinct;
  for (double p : poles)
    if (distinct.empty() || p - distinct.back() > 1e-10 * (1.0 + p))
      distinct.push_back(p);
  return distinct;
}

RootScan find_roots(const ResonanceModes& modes, int scan_points) {
  if (scan_points < 4)
    throw std::invalid_argument("find_roots: need at least 4 scan points");
  RootScan scan;
  scan.poles = mu_poles(modes);
  if (scan.poles.empty()) return scan;

  auto S = [&](double nu) { return spectral_function(modes, nu); };
  auto off = [](double p) { return std::max(1e-12, 1e-9 * p); };

  for (size_t i = 0; i < scan.poles.size(); ++i) {
    const double lo = scan.poles[i] + off(scan.poles[i]);
    const double hi = (i + 1 < scan.poles.size())
                          ? scan.poles[i + 1] - off(scan.poles[i + 1])
                          : 2.0 * scan.poles[i];
    int found = 0;
    double prev_nu = lo;
    double prev_s = S(lo);
    for (int j = 1; j < scan_points; ++j) {
      const double nu =
          lo + (hi - lo) * static_cast<double>(j) / (scan_points - 1);
      const double s = S(nu);
      if ((prev_s < 0.0 && s > 0.0) || (prev_s > 0.0 && s < 0.0)) {
        scan.roots.push_back(bisect(S, prev_nu, nu));
        ++found;
      } else if (s == 0.0) {
        scan.roots.push_back(nu);
        ++found;
      }
      prev_nu = nu;
      prev_s = s;
    }
    scan.roots_per_interval.push_back(found);
  }
  std::sort(scan.roots.begin(), scan.roots.end());
  return scan;
}

UnionCheck spectrum_union_check(const StructuralSpectrum& snapped,
                                const ResonanceModes& modes, double tol) {
  const SpectrumA0 a0 = spectrum_A0(snapped);
  std::vector<double> lhs;
  for (size_t c = 0; c < a0.values.size(); ++c)
    if (a0.values[c] > 1e-12) lhs.push_back(a0.values[c]);

  std::vector<double> rhs;
  for (int n = 0; n < modes.betas.size(); ++n)
    if (modes.zero_mean[static_cast<size_t>(n)]) rhs.push_back(modes.betas[n]);
  for (double root : find_roots(modes).roots) rhs.push_back(1.0 / root);

  const std::vector<double> rhs_clustered = cluster_values(rhs, 1e-9);
  UnionCheck check;
  check.hausdorff = hausdorff_distance(lhs, rhs_clustered);
  check.clusters_a0 = static_cast<int>(lhs.size());
  check.clusters_union = static_cast<int>(rhs_clustered.size());
  check.pass = check.hausdorff <= tol;
  return check;
}

}  // namespace hcband
