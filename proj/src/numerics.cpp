#include "hcband/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace hcband {

namespace {

void check_hermitian(const Mat& A, const char* name) {
  const double scale = A.norm();
  if (scale == 0.0) return;
  const double dev = (A - A.adjoint()).norm();
  if (dev > 1e-13 * scale)
    throw numerical_error(std::string(name) +
                          " is not Hermitian within tolerance (relative " +
                          "deviation " + std::to_string(dev / scale) + ")");
}

void check_residuals(const Mat& A, const Mat& BV, const HermitianEig& eig,
                     double residual_tol) {
  const double scale = A.norm();
  const Mat lhs = A * eig.vectors;
  for (int j = 0; j < eig.values.size(); ++j) {
    const double res = (lhs.col(j) - eig.values(j) * BV.col(j)).norm();
    if (res > residual_tol * (scale > 0.0 ? scale : 1.0))
      throw numerical_error("eigensolver residual out of contract at pair " +
                            std::to_string(j) + ": " + std::to_string(res));
  }
}

}  // namespace

HermitianEig hermitian_eig(const Mat& A, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Mat> solver;
  solver.compute(A, with_vectors ? Eigen::ComputeEigenvectors
                                 : Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) {
    HermitianEig eig;
    eig.values = solver.eigenvalues();
    if (with_vectors) eig.vectors = solver.eigenvectors();
    return eig;
  }

  Eigen::ComplexSchur<Mat> schur(A, with_vectors);
  if (schur.info() != Eigen::Success)
    throw numerical_error("Hermitian eigensolver failed");
  const int n = static_cast<int>(A.rows());
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  const auto diag = schur.matrixT().diagonal();
  std::stable_sort(order.begin(), order.end(), [&diag](int a, int b) {
    return diag(a).real() < diag(b).real();
  });
  HermitianEig eig;
  eig.values.resize(n);
  if (with_vectors) eig.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    eig.values(i) = diag(order[static_cast<size_t>(i)]).real();
    if (with_vectors)
      eig.vectors.col(i) = schur.matrixU().col(order[static_cast<size_t>(i)]);
  }
  return eig;
}

HermitianEig hermitian_generalized_eig(const Mat& A, const Mat& B,
                                       double residual_tol) {
  check_hermitian(A, "A");
  check_hermitian(B, "B");
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success) {
    // Locate the offending pivot for the diagnostic through LDLT.
    Eigen::LDLT<Mat> ldlt(B);
    const RVec d = ldlt.vectorD().real();
    int pivot = -1;
    for (int i = 0; i < d.size(); ++i)
      if (d(i) <= 0.0) {
        pivot = i;
        break;
      }
    throw numerical_error("B is not positive definite (pivot " +
                          std::to_string(pivot) + " fails)");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(A, B);
  if (solver.info() != Eigen::Success)
    throw numerical_error("generalized Hermitian eigensolver failed");
  HermitianEig eig{solver.eigenvalues(), solver.eigenvectors()};
  check_residuals(A, B * eig.vectors, eig, residual_tol);
  return eig;
}

HermitianEig hermitian_generalized_eig(const Mat& A, const RVec& B_diag,
                                       double residual_tol) {
  check_hermitian(A, "A");
  for (int i = 0; i < B_diag.size(); ++i)
    if (!(B_diag(i) > 0.0))
      throw numerical_error("B is not positive definite (pivot " +
                            std::to_string(i) + " fails)");
  const RVec inv_sqrt = B_diag.cwiseSqrt().cwiseInverse();
  const Mat C = inv_sqrt.asDiagonal() * A * inv_sqrt.asDiagonal();
  HermitianEig eig = hermitian_eig(C);
  eig.vectors = inv_sqrt.asDiagonal() * eig.vectors;
  const Mat BV = B_diag.asDiagonal() * eig.vectors;
  check_residuals(A, BV, eig, residual_tol);
  return eig;
}

CVec general_eig(const Mat& A) {
  Eigen::ComplexEigenSolver<Mat> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw numerical_error("general eigensolver failed to converge");
  return solver.eigenvalues();
}

GeneralEig general_eig_full(const Mat& A) {
  Eigen::ComplexEigenSolver<Mat> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw numerical_error("general eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Complex determinant(const Mat& A) { return A.partialPivLu().determinant(); }

double operator_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

std::vector<ContourNode> contour_nodes(Complex center, double radius, int M) {
  if (M < 4) throw numerical_error("contour_nodes: need M >= 4");
  std::vector<ContourNode> nodes(static_cast<size_t>(M));
  const double step = 2.0 * M_PI / M;
  for (int j = 0; j < M; ++j) {
    const Complex dir = std::polar(1.0, step * j);
    nodes[static_cast<size_t>(j)] = {center + radius * dir,
                                     -(radius / M) * dir};
  }
  return nodes;
}

}  // namespace hcband
