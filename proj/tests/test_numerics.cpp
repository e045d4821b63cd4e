#include <cmath>
#include <random>

#include "doctest.h"
#include "hcband/numerics.hpp"

using namespace hcband;

namespace {

Mat random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(nd(rng), nd(rng));
  return A;
}

Mat random_hermitian(int n, std::uint64_t seed) {
  const Mat A = random_matrix(n, seed);
  return 0.5 * (A + A.adjoint());
}

Mat random_hpd(int n, std::uint64_t seed) {
  const Mat A = random_matrix(n, seed);
  return A * A.adjoint() + Mat::Identity(n, n);
}

}  // namespace

TEST_CASE("hermitian generalized eigensolve satisfies the pencil") {
  const int n = 24;
  const Mat A = random_hermitian(n, 1);
  const Mat B = random_hpd(n, 2);
  const HermitianEig eig = hermitian_generalized_eig(A, B);
  REQUIRE(eig.values.size() == n);
  for (int i = 1; i < n; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
  const Mat residual =
      A * eig.vectors - B * eig.vectors * eig.values.asDiagonal();
  CHECK((residual.norm() / A.norm()) < 1e-11);
  const Mat gram = eig.vectors.adjoint() * B * eig.vectors;
  CHECK((gram - Mat::Identity(n, n)).norm() < 1e-11);
}

TEST_CASE("diagonal-B overload agrees with the dense overload") {
  const int n = 16;
  const Mat A = random_hermitian(n, 3);
  RVec d(n);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(0.5, 3.0);
  for (int i = 0; i < n; ++i) d[i] = ud(rng);
  const HermitianEig dense =
      hermitian_generalized_eig(A, Mat(d.cast<Complex>().asDiagonal()));
  const HermitianEig diag = hermitian_generalized_eig(A, d);
  CHECK((dense.values - diag.values).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("general eigenvalues reproduce a prescribed spectrum") {
  const int n = 10;
  CVec target(n);
  for (int i = 0; i < n; ++i) target[i] = Complex(i - 4.0, 0.3 * i);
  const Mat S = random_matrix(n, 5);
  const Mat A = S * target.asDiagonal() * S.inverse();
  CVec got = general_eig(A);
  // Match each prescribed eigenvalue to its nearest computed one.
  for (int i = 0; i < n; ++i) {
    double best = 1e300;
    for (int j = 0; j < n; ++j)
      best = std::min(best, std::abs(got[j] - target[i]));
    CHECK(best < 1e-9);
  }
  const GeneralEig full = general_eig_full(A);
  const Mat residual =
      A * full.vectors - full.vectors * full.values.asDiagonal();
  CHECK(residual.norm() / A.norm() < 1e-10);
}

TEST_CASE("determinant matches products and permutation signs") {
  Mat T = Mat::Zero(3, 3);
  T(0, 0) = Complex(2.0, 0.0);
  T(1, 1) = Complex(0.0, 1.0);
  T(2, 2) = Complex(-3.0, 0.0);
  T(0, 2) = Complex(7.0, -1.0);  // upper triangle does not change det
  CHECK(std::abs(determinant(T) - Complex(0.0, -6.0)) < 1e-14);

  Mat P = Mat::Zero(3, 3);  // cyclic permutation, det = +1
  P(0, 1) = 1.0;
  P(1, 2) = 1.0;
  P(2, 0) = 1.0;
  CHECK(std::abs(determinant(P) - Complex(1.0, 0.0)) < 1e-14);

  const Mat A = random_matrix(8, 6);
  CHECK(std::abs(determinant(A) - A.determinant()) <
        1e-10 * std::abs(A.determinant()));
}

TEST_CASE("operator norm is the largest singular value") {
  // Rank-one: ||u v*|| = |u| |v|.
  CVec u = CVec::Zero(5), v = CVec::Zero(5);
  u[0] = Complex(3.0, 4.0);  // |u| = 5
  v[2] = Complex(0.0, 2.0);  // |v| = 2
  const Mat R = u * v.adjoint();
  CHECK(operator_norm(R) == doctest::Approx(10.0).epsilon(1e-12));

  // Hermitian: spectral norm equals the largest |eigenvalue|.
  const Mat H = random_hermitian(12, 7);
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const double expected = std::max(std::abs(es.eigenvalues().minCoeff()),
                                   std::abs(es.eigenvalues().maxCoeff()));
  CHECK(operator_norm(H) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("contour quadrature carries the resolvent orientation") {
  const Complex center(0.7, -0.2);
  const double radius = 0.45;

  // Below the supported resolution the node set is refused outright.
  CHECK_THROWS_AS(contour_nodes(center, radius, 3), numerical_error);

  // At the center the discrete sum is exactly +1 for every M.
  for (int M : {4, 8, 17, 64}) {
    const std::vector<ContourNode> nodes = contour_nodes(center, radius, M);
    REQUIRE(static_cast<int>(nodes.size()) == M);
    Complex acc = 0.0, mirror = 0.0;
    for (const ContourNode& node : nodes) {
      acc += node.weight / (center - node.zeta);
      mirror += node.weight / (node.zeta - center);
    }
    CHECK(std::abs(acc - 1.0) < 1e-14);
    CHECK(std::abs(mirror + 1.0) < 1e-14);
  }

  // Off center the sum is exactly 1/(1 - u^M), u = (a - center)/radius,
  // hence +1 inside and 0 outside at the geometric rate |u|^M.
  const Complex inside = center + Complex(0.2, 0.1);
  const Complex outside = center + Complex(radius + 0.4, 0.0);
  for (int M : {8, 64}) {
    const std::vector<ContourNode> nodes = contour_nodes(center, radius, M);
    Complex acc_in = 0.0, acc_out = 0.0;
    for (const ContourNode& node : nodes) {
      acc_in += node.weight / (inside - node.zeta);
      acc_out += node.weight / (outside - node.zeta);
    }
    const Complex u_in = (inside - center) / radius;
    const Complex u_out = (outside - center) / radius;
    CHECK(std::abs(acc_in - 1.0 / (1.0 - std::pow(u_in, M))) < 1e-13);
    CHECK(std::abs(acc_out - 1.0 / (1.0 - std::pow(u_out, M))) < 1e-13);
  }
  const std::vector<ContourNode> fine = contour_nodes(center, radius, 64);
  Complex acc_in = 0.0, acc_out = 0.0;
  for (const ContourNode& node : fine) {
    acc_in += node.weight / (inside - node.zeta);
    acc_out += node.weight / (outside - node.zeta);
  }
  CHECK(std::abs(acc_in - 1.0) < 1e-12);
  CHECK(std::abs(acc_out) < 1e-12);
}

TEST_CASE("bisection finds roots and rejects signless brackets") {
  const double root = bisect([](double t) { return std::cos(t); }, 0.0, 2.0);
  CHECK(root == doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK_THROWS_AS(bisect([](double t) { return 1.0 + t * t; }, -1.0, 1.0),
                  numerical_error);
}
