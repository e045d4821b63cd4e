#include "hcband/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hcband/numerics.hpp"

namespace hcband {

namespace {

void sort_by_re_im(CVec& xi) {
  std::vector<Complex> v(xi.data(), xi.data() + xi.size());
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (int i = 0; i < xi.size(); ++i) xi[i] = v[static_cast<size_t>(i)];
}

void fill_frequencies(BlochSpectrum& out) {
  const double tol = 1e-10;
  for (int i = 0; i < out.xi.size(); ++i)
    if (std::abs(out.xi[i].imag()) > tol * (1.0 + std::abs(out.xi[i])) ||
        out.xi[i].real() < -tol)
      return;  // complex spectrum: leave frequencies empty
  out.frequencies.resize(out.xi.size());
  for (int i = 0; i < out.xi.size(); ++i)
    out.frequencies[i] = std::sqrt(std::max(0.0, out.xi[i].real()));
}

}  // namespace

Mat assemble_Bk_direct(const GramPair& gram, Complex k) {
  Mat M = -gram.K_D;
  M.diagonal() += gram.K_Y.cast<Complex>();
  M *= k;
  M += gram.K_D;
  return M;
}

Mat reconstruct_Bk_spectral(const StructuralSpectrum& spec, Complex k) {
  const int dim = static_cast<int>(spec.lambdas.size());
  CVec t(dim);
  for (int i = 0; i < dim; ++i)
    t[i] = k * (1.0 - spec.lambdas[i]) + spec.lambdas[i];
  const Mat W = spec.K_Y.cast<Complex>().asDiagonal() * spec.Psi;
  return W * t.asDiagonal() * W.adjoint();
}

Complex rho_of_z(double lambda, Complex z) {
  return z / ((1.0 - lambda) + z * lambda);
}

Mat A_of_z(const StructuralSpectrum& spec, Complex z) {
  const int dim = static_cast<int>(spec.lambdas.size());
  CVec rho(dim);
  for (int i = 0; i < dim; ++i) {
    const double lambda = spec.lambdas[i];
    if (lambda == 1.0) {
      // rho = z/z: the apparent pole at z = 0 is removable and the symbol
      // is identically 1 on the snapped lambda = 1 block.
      rho[i] = 1.0;
      continue;
    }
    const Complex den = (1.0 - lambda) + z * lambda;
    if (std::abs(den) <= 1e-12 * (1.0 + std::abs(z)))
      throw numerical_error("A(z) evaluated at a pole of resonance index " +
                            std::to_string(i));
    rho[i] = z / den;
  }
  return spec.Psi * rho.asDiagonal() * spec.Psi.adjoint();
}

BlochSpectrum bloch_eigenvalues(const GramPair& gram, Complex k) {
  BlochSpectrum out;
  out.alpha = gram.alpha;
  out.k = k;
  out.xi = general_eig(assemble_Bk_direct(gram, k));
  // A vanishing eigenvalue of M_k is exactly the excluded-set condition
  // k = -lambda/(1 - lambda) for some structural lambda.
  const double scale = gram.K_Y.maxCoeff();
  for (int i = 0; i < out.xi.size(); ++i)
    if (std::abs(out.xi[i]) <= 1e-10 * (1.0 + std::abs(k)) * scale)
      throw unsupported_error(
          "contrast k lies in the excluded set (singular Bloch form)");
  sort_by_re_im(out.xi);
  fill_frequencies(out);
  return out;
}

BlochSpectrum bloch_eigenvalues(const StructuralSpectrum& spec, Complex k) {
  for (int i = 0; i < spec.mus.size(); ++i) {
    const double mu = spec.mus[i];
    if (mu == -0.5) continue;  // lambda = 1: no contrast makes this mode singular
    const double z_excluded = (mu - 0.5) / (mu + 0.5);  // 1/pole of A
    if (std::abs(k - z_excluded) <= 1e-10 * (1.0 + std::abs(k)))
      throw unsupported_error("contrast k lies in the excluded set near " +
                              std::to_string(z_excluded));
  }
  if (std::abs(k) <= 1e-10)
    throw unsupported_error("contrast k = 0 has no inverse family value");

  BlochSpectrum out;
  out.alpha = spec.alpha;
  out.k = k;
  const CVec a_eigs = general_eig(A_of_z(spec, 1.0 / k));
  out.xi.resize(a_eigs.size());
  for (int i = 0; i < a_eigs.size(); ++i) out.xi[i] = 1.0 / a_eigs[i];
  sort_by_re_im(out.xi);
  fill_frequencies(out);
  return out;
}

Mat a_n_matrix(const StructuralSpectrum& snapped, int n) {
  if (!snapped.snapped)
    throw numerical_error("a_n_matrix requires a snapped spectrum");
  if (n < 1) throw std::invalid_argument("a_n_matrix: n must be >= 1");
  const int dim = static_cast<int>(snapped.lambdas.size());
  RVec c = RVec::Zero(dim);
  for (int i : snapped.split.w3) {
    const double mu = snapped.mus[i];
    const double lead = 1.0 / (mu + 0.5);
    c[i] = lead * std::pow((mu - 0.5) / (mu + 0.5), n - 1);
  }
  if (n == 1)
    for (int i : snapped.split.w1) c[i] = 1.0;
  return snapped.Psi * c.cast<Complex>().asDiagonal() * snapped.Psi.adjoint();
}

}  // namespace hcband
