#include "hcband/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hcband/geometry.hpp"
#include "hcband/numerics.hpp"

namespace hcband {

namespace {

double alpha_poincare_reciprocal(const QuasiMomentum& alpha) {
  // Reciprocal of the discrete Poincare constant: the smallest |kappa|^2
  // over the dual lattice, which is |alpha|^2 for alpha in the Brillouin
  // zone and (2 pi)^2 once the zero mode is excluded.
  return alpha.is_zero() ? 4.0 * M_PI * M_PI : alpha.alpha.squaredNorm();
}

void require_snapped(const StructuralSpectrum& spec, const char* who) {
  if (!spec.snapped)
    throw numerical_error(std::string(who) + " requires a snapped spectrum");
}

// Quadrature coefficients q_i = sum_j w_j / (lambda_i - zeta_j), the
// eigenvalue-wise action of the discretized Riesz projection.
CVec projection_filter(const CVec& values,
                       const std::vector<ContourNode>& nodes) {
  CVec q = CVec::Zero(values.size());
  for (const ContourNode& node : nodes)
    for (int i = 0; i < values.size(); ++i)
      q[i] += node.weight / (values[i] - node.zeta);
  return q;
}

void check_projection(const Mat& P, const EigenvalueGroup& group, int M) {
  const double idem = (P * P - P).norm();
  if (idem > 1e-8)
    throw numerical_error(
        "projection idempotency defect " + std::to_string(idem) +
        " exceeds 1e-8; increase the quadrature order M (currently " +
        std::to_string(M) + ")");
  const double trace_dev = std::abs(P.trace() - Complex(group.multiplicity));
  if (trace_dev > 1e-8)
    throw numerical_error(
        "projection trace deviates from the group multiplicity by " +
        std::to_string(trace_dev) + "; increase the quadrature order M");
}

void check_contour_clear(const FamilyEig& eig, const EigenvalueGroup& group) {
  const double margin = contour_margin(eig, group);
  if (margin <= 1e-13 * std::max(1.0, group.beta0))
    throw numerical_error(
        "an eigenvalue of A(z) lies on the group contour (margin " +
        std::to_string(margin) + ")");
}

}  // namespace

SpectrumA0 spectrum_A0(const StructuralSpectrum& snapped, double tol_cluster) {
  require_snapped(snapped, "spectrum_A0");
  const int dim = static_cast<int>(snapped.lambdas.size());
  const int q = static_cast<int>(snapped.split.w2.size());

  std::vector<double> raw;
  raw.reserve(static_cast<size_t>(q));
  if (q > 0) {
    Mat W(dim, q);
    for (int j = 0; j < q; ++j) W.col(j) = snapped.Psi.col(snapped.split.w2[j]);
    const Mat gram = W.adjoint() * W;
    Eigen::SelfAdjointEigenSolver<Mat> solver(gram);
    if (solver.info() != Eigen::Success)
      throw numerical_error("W2 Gram eigensolver failed");
    for (int i = 0; i < q; ++i) raw.push_back(solver.eigenvalues()(i));
  }

  SpectrumA0 out;
  out.values.push_back(0.0);
  out.multiplicities.push_back(dim - q);
  // Consecutive-gap clustering of the (ascending) nonzero part.
  size_t i = 0;
  while (i < raw.size()) {
    size_t j = i + 1;
    double sum = raw[i];
    while (j < raw.size() && raw[j] - raw[j - 1] <= tol_cluster) {
      sum += raw[j];
      ++j;
    }
    out.values.push_back(sum / static_cast<double>(j - i));
    out.multiplicities.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

EigenvalueGroup choose_contour(const SpectrumA0& spectrum, int group_index) {
  std::vector<int> nonzero;  // cluster indices, ascending value
  for (size_t c = 0; c < spectrum.values.size(); ++c)
    if (spectrum.values[c] > 1e-12) nonzero.push_back(static_cast<int>(c));

  const int count = static_cast<int>(nonzero.size());
  if (group_index < 1 || group_index > count)
    throw selection_error("eigenvalue group index " +
                          std::to_string(group_index) +
                          " out of range; the spectrum of A(0) has " +
                          std::to_string(count) + " nonzero group(s)");

  const int c = nonzero[static_cast<size_t>(count - group_index)];
  EigenvalueGroup group;
  group.index = group_index;
  group.beta0 = spectrum.values[static_cast<size_t>(c)];
  group.multiplicity = spectrum.multiplicities[static_cast<size_t>(c)];
  double d = group.beta0 / 2.0;  // half-gap to the zero cluster at worst
  for (size_t o = 0; o < spectrum.values.size(); ++o)
    if (static_cast<int>(o) != c)
      d = std::min(d, std::abs(group.beta0 - spectrum.values[o]) / 2.0);
  group.d = d;
  return group;
}

Mat resolvent(const Mat& A, Complex zeta, double residual_tol) {
  Mat shifted = A;
  shifted.diagonal().array() -= zeta;
  const Mat X = shifted.partialPivLu().solve(
      Mat::Identity(A.rows(), A.cols()));
  const double res = (shifted * X - Mat::Identity(A.rows(), A.cols())).norm();
  // An exactly singular shift yields inf/NaN in X; std::isfinite keeps that
  // case from slipping past the comparison below.
  if (!std::isfinite(res) || res > residual_tol * shifted.norm() * X.norm())
    throw numerical_error("resolvent residual " + std::to_string(res) +
                          " out of contract at zeta = (" +
                          std::to_string(zeta.real()) + ", " +
                          std::to_string(zeta.imag()) + ")");
  return X;
}

FamilyEig evaluate_A(const StructuralSpectrum& spec, Complex z,
                     bool with_vectors) {
  FamilyEig out;
  out.z = z;
  const Mat A = A_of_z(spec, z);
  if (z.imag() == 0.0) {
    const HermitianEig eig = hermitian_eig(A, with_vectors);
    out.values = eig.values.cast<Complex>();
    if (with_vectors) out.vectors = eig.vectors;
    out.hermitian = true;
  } else if (with_vectors) {
    GeneralEig eig = general_eig_full(A);
    out.values = eig.values;
    out.vectors = eig.vectors;
    out.hermitian = false;
  } else {
    out.values = general_eig(A);
    out.hermitian = false;
  }
  return out;
}

std::vector<Complex> certificate_grid(double r_star) {
  std::vector<Complex> zs;
  const double radii[] = {0.25, 0.5, 0.75, 0.9};
  for (double f : radii)
    for (int a = 0; a < 8; ++a)
      zs.push_back(std::polar(f * r_star, 2.0 * M_PI * a / 8.0));
  return zs;
}

double contour_margin(const FamilyEig& eig, const EigenvalueGroup& group) {
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < eig.values.size(); ++i) {
    const double dist = std::abs(eig.values[i] - Complex(group.beta0));
    margin = std::min(margin, std::abs(dist - group.d));
  }
  return margin;
}

Mat projection_P(const FamilyEig& eig, const EigenvalueGroup& group, int M) {
  if (M < 16) throw std::invalid_argument("projection_P: need M >= 16");
  check_contour_clear(eig, group);
  const auto nodes = contour_nodes(Complex(group.beta0), group.d, M);
  const CVec q = projection_filter(eig.values, nodes);
  Mat P;
  if (eig.hermitian) {
    P = eig.vectors * q.asDiagonal() * eig.vectors.adjoint();
  } else {
    const Mat inv = eig.vectors.partialPivLu().solve(
        Mat::Identity(eig.vectors.rows(), eig.vectors.cols()));
    P = eig.vectors * q.asDiagonal() * inv;
  }
  check_projection(P, group, M);
  return P;
}

Mat projection_P(const StructuralSpectrum& spec, Complex z,
                 const EigenvalueGroup& group, int M) {
  return projection_P(evaluate_A(spec, z), group, M);
}

Mat projection_P_lu(const Mat& A_z, const EigenvalueGroup& group, int M) {
  if (M < 16) throw std::invalid_argument("projection_P_lu: need M >= 16");
  const auto nodes = contour_nodes(Complex(group.beta0), group.d, M);
  Mat P = Mat::Zero(A_z.rows(), A_z.cols());
  for (const ContourNode& node : nodes)
    P += node.weight * resolvent(A_z, node.zeta);
  check_projection(P, group, M);
  return P;
}

Complex weighted_mean(const FamilyEig& eig, const EigenvalueGroup& group,
                      int M) {
  if (M < 16) throw std::invalid_argument("weighted_mean: need M >= 16");
  check_contour_clear(eig, group);
  const auto nodes = contour_nodes(Complex(group.beta0), group.d, M);
  // beta0 + (1/m) tr[(A - beta0) P] with the trace folded into the contour:
  // -(1/(2 pi i)) integral of (zeta - beta0) tr R(zeta) d zeta.
  Complex acc = 0.0;
  for (const ContourNode& node : nodes) {
    Complex tr = 0.0;
    for (int i = 0; i < eig.values.size(); ++i)
      tr += 1.0 / (eig.values[i] - node.zeta);
    acc += node.weight * (node.zeta - Complex(group.beta0)) * tr;
  }
  return Complex(group.beta0) + acc / static_cast<double>(group.multiplicity);
}

Complex weighted_mean(const StructuralSpectrum& spec, Complex z,
                      const EigenvalueGroup& group, int M) {
  return weighted_mean(evaluate_A(spec, z), group, M);
}

double radius_r_star(const QuasiMomentum& alpha, double d, double mu_minus) {
  if (!(d > 0.0)) throw std::invalid_argument("radius_r_star: need d > 0");
  if (!(mu_minus > -0.5 && mu_minus < 0.0))
    throw numerical_error("radius_r_star requires mu_minus in (-1/2, 0); got " +
                          std::to_string(mu_minus));
  const double a = alpha_poincare_reciprocal(alpha);
  const double zs = z_star(mu_minus);
  return a * d * std::abs(zs) / (1.0 / (0.5 - mu_minus) + a * d);
}

double error_bound(int p, Complex z, double d, double r_star) {
  if (p < 0) throw std::invalid_argument("error_bound: need p >= 0");
  const double az = std::abs(z);
  if (!(az < r_star))
    throw std::invalid_argument("error_bound: |z| must be below r*");
  return d * std::pow(az, p + 1) / (std::pow(r_star, p) * (r_star - az));
}

double a_family_shift_bound(const QuasiMomentum& alpha, double mu_minus,
                            double z) {
  if (!(mu_minus > -0.5 && mu_minus < 0.5))
    throw std::invalid_argument("a_family_shift_bound: mu_minus out of range");
  const double zs = z_star(mu_minus);
  if (!(z > zs && z < 0.0))
    throw std::invalid_argument(
        "a_family_shift_bound: z must lie in (z*, 0)");
  const double a = alpha_poincare_reciprocal(alpha);
  return std::abs(z) / (a * (0.5 - mu_minus) * (-zs - std::abs(z)));
}

SeriesExpansion series_coefficients(const StructuralSpectrum& snapped,
                                    const EigenvalueGroup& group, int p_max,
                                    int M, bool cross_check) {
  require_snapped(snapped, "series_coefficients");
  if (p_max < 1)
    throw std::invalid_argument("series_coefficients: need p_max >= 1");
  if (M < 16) throw std::invalid_argument("series_coefficients: need M >= 16");

  const int dim = static_cast<int>(snapped.lambdas.size());
  Eigen::SelfAdjointEigenSolver<Mat> a0_eig(A_of_z(snapped, 0.0));
  if (a0_eig.info() != Eigen::Success)
    throw numerical_error("eigensolver failed on A(0)");
  const RVec betas = a0_eig.eigenvalues();
  const Mat& U = a0_eig.eigenvectors();

  // The Taylor matrices live on S = W1 + W3; restrict every trace there.
  std::vector<int> S = snapped.split.w1;
  S.insert(S.end(), snapped.split.w3.begin(), snapped.split.w3.end());
  std::sort(S.begin(), S.end());
  const int ns = static_cast<int>(S.size());

  Mat Psi_S(dim, ns);
  for (int j = 0; j < ns; ++j) Psi_S.col(j) = snapped.Psi.col(S[j]);
  const Mat X = Psi_S.adjoint() * U;  // ns x dim

  // Diagonal Taylor symbols on S for each order.
  std::vector<CVec> c(static_cast<size_t>(p_max) + 1);
  for (int k = 1; k <= p_max; ++k) c[static_cast<size_t>(k)] = CVec::Zero(ns);
  for (int j = 0; j < ns; ++j) {
    const int idx = S[j];
    const double lambda = snapped.lambdas[idx];
    if (lambda == 0.0) {
      c[1][j] = 1.0;
    } else {
      const double mu = snapped.mus[idx];
      const double lead = 1.0 / (mu + 0.5);
      const double ratio = (mu - 0.5) / (mu + 0.5);
      double power = lead;
      for (int k = 1; k <= p_max; ++k) {
        c[static_cast<size_t>(k)][j] = power;
        power *= ratio;
      }
    }
  }

  const auto nodes = contour_nodes(Complex(group.beta0), group.d, M);
  std::vector<Complex> contrib(static_cast<size_t>(p_max) + 1, Complex(0.0));
  std::vector<Mat> F(static_cast<size_t>(p_max) + 1);
  std::vector<std::vector<Mat>> T(
      static_cast<size_t>(p_max) + 1,
      std::vector<Mat>(static_cast<size_t>(p_max) + 1));

  for (const ContourNode& node : nodes) {
    CVec dinv(dim);
    for (int i = 0; i < dim; ++i) dinv[i] = 1.0 / (betas[i] - node.zeta);
    const Mat G = X * dinv.asDiagonal() * X.adjoint();
    for (int k = 1; k <= p_max; ++k)
      F[static_cast<size_t>(k)] = c[static_cast<size_t>(k)].asDiagonal() * G;

    for (int n = 1; n <= p_max; ++n) {
      T[static_cast<size_t>(n)][1] = F[static_cast<size_t>(n)];
      for (int p = 2; p <= n; ++p) {
        Mat acc = Mat::Zero(ns, ns);
        for (int k = 1; k <= n - p + 1; ++k)
          acc.noalias() +=
              F[static_cast<size_t>(k)] *
              T[static_cast<size_t>(n - k)][static_cast<size_t>(p - 1)];
        T[static_cast<size_t>(n)][static_cast<size_t>(p)] = acc;
      }
      Complex node_sum = 0.0;
      double sign = -1.0;  // (-1)^p starting at p = 1
      for (int p = 1; p <= n; ++p) {
        node_sum += sign / static_cast<double>(p) *
                    T[static_cast<size_t>(n)][static_cast<size_t>(p)].trace();
        sign = -sign;
      }
      contrib[static_cast<size_t>(n)] += node.weight * node_sum;
    }
  }

  SeriesExpansion out;
  out.group = group;
  out.z_star = pole_set(snapped).z_star_alpha;
  out.r_star = radius_r_star(snapped.alpha, group.d, snapped.mu_minus);
  out.coeffs.resize(static_cast<size_t>(p_max) + 1);
  out.coeffs[0] = group.beta0;
  out.imag_residue = 0.0;
  for (int n = 1; n <= p_max; ++n) {
    // The nodes fold -(1/(2 pi i)); the composition prefactor is
    // +(1/(2 pi i m)), hence the sign flip.
    const Complex beta_n =
        -contrib[static_cast<size_t>(n)] /
        static_cast<double>(group.multiplicity);
    out.coeffs[static_cast<size_t>(n)] = beta_n.real();
    out.imag_residue = std::max(out.imag_residue, std::abs(beta_n.imag()));
  }

  out.cauchy_bounds_ok = true;
  for (int n = 1; n <= p_max; ++n) {
    const double cap = group.d * std::pow(out.r_star, -n);
    if (std::abs(out.coeffs[static_cast<size_t>(n)]) > cap * (1.0 + 1e-9))
      out.cauchy_bounds_ok = false;
  }

  if (cross_check) {
    const int Mz = 32;
    const double rc = out.r_star / 2.0;
    std::vector<Complex> means(static_cast<size_t>(Mz));
    for (int l = 0; l < Mz; ++l) {
      const Complex zl = std::polar(rc, 2.0 * M_PI * l / Mz);
      const CVec values = general_eig(A_of_z(snapped, zl));
      FamilyEig eig;
      eig.z = zl;
      eig.values = values;
      means[static_cast<size_t>(l)] = weighted_mean(eig, group, M);
    }
    double worst = 0.0;
    for (int n = 0; n <= p_max; ++n) {
      Complex cauchy = 0.0;
      for (int l = 0; l < Mz; ++l)
        cauchy += means[static_cast<size_t>(l)] *
                  std::polar(1.0, -2.0 * M_PI * l * n / Mz);
      cauchy /= static_cast<double>(Mz) * std::pow(rc, n);
      const double cap = group.d * std::pow(out.r_star, -n);
      const double scale =
          std::max({std::abs(cauchy), std::abs(out.coeffs[(size_t)n]),
                    1e-3 * cap});
      worst = std::max(
          worst, std::abs(out.coeffs[(size_t)n] - cauchy.real()) / scale);
    }
    out.cauchy_deviation = worst;
    if (worst > 1e-7)
      throw numerical_error(
          "series coefficients deviate from the Cauchy extraction by " +
          std::to_string(worst) + " relative (tolerance 1e-7)");
  }
  return out;
}

SeparationReport verify_separation(const StructuralSpectrum& snapped,
                                   const EigenvalueGroup& group,
                                   const std::vector<Complex>& zs, int M) {
  SeparationReport report;
  report.all_pass = true;
  for (Complex z : zs) {
    SeparationSample s;
    s.z = z;
    try {
      const FamilyEig eig = evaluate_A(snapped, z);
      s.margin = contour_margin(eig, group);
      s.contour_clear = s.margin > 1e-13 * std::max(1.0, group.beta0);
      const Mat P = projection_P(eig, group, M);
      s.idempotency = (P * P - P).norm();
      s.trace_deviation =
          std::abs(P.trace() - Complex(group.multiplicity));
      s.pass = s.contour_clear && s.idempotency <= 1e-8 &&
               s.trace_deviation <= 1e-8;
    } catch (const numerical_error&) {
      s.pass = false;
    }
    report.samples.push_back(s);
    report.all_pass = report.all_pass && s.pass;
  }
  return report;
}

StructuralSpectrum build_synthetic_family(const std::vector<double>& mu_w3,
                                          int n_w1, int n_w2,
                                          std::uint64_t seed) {
  if (mu_w3.empty())
    throw std::invalid_argument("build_synthetic_family: need interior modes");
  if (n_w1 < 0 || n_w2 < 0)
    throw std::invalid_argument("build_synthetic_family: negative block size");
  for (double mu : mu_w3)
    if (!(mu > -0.5 && mu < 0.5))
      throw std::invalid_argument(
          "build_synthetic_family: interior mu must lie in (-1/2, 1/2)");

  const int dim = n_w1 + static_cast<int>(mu_w3.size()) + n_w2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat Z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) Z(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(Z);
  Mat Q = qr.householderQ() * Mat::Identity(dim, dim);
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex r = R(j, j);
    if (std::abs(r) > 0.0) Q.col(j) *= r / std::abs(r);
  }

  std::vector<double> lambdas_w3;
  lambdas_w3.reserve(mu_w3.size());
  for (double mu : mu_w3) lambdas_w3.push_back(0.5 - mu);
  std::sort(lambdas_w3.begin(), lambdas_w3.end());

  StructuralSpectrum spec;
  spec.alpha.alpha = Vec3(1.0, 0.0, 0.0);
  spec.K_Y = RVec::Ones(dim);
  spec.Psi = Q;
  spec.lambdas.resize(dim);
  spec.snapped = true;
  int pos = 0;
  for (int i = 0; i < n_w1; ++i, ++pos) {
    spec.lambdas[pos] = 0.0;
    spec.split.w1.push_back(pos);
  }
  for (double lambda : lambdas_w3) {
    spec.lambdas[pos] = lambda;
    spec.split.w3.push_back(pos);
    ++pos;
  }
  for (int i = 0; i < n_w2; ++i, ++pos) {
    spec.lambdas[pos] = 1.0;
    spec.split.w2.push_back(pos);
  }
  spec.mus = RVec::Constant(dim, 0.5) - spec.lambdas;
  spec.split.gap_w1 = lambdas_w3.front();
  spec.split.gap_w2 = 1.0 - lambdas_w3.back();
  spec.mu_minus = 0.5 - lambdas_w3.back();
  spec.mu_plus = 0.5 - lambdas_w3.front();
  return spec;
}

}  // namespace hcband
