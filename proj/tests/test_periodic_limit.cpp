#include <cmath>

#include "doctest.h"
#include "hcband/config.hpp"
#include "hcband/periodic_limit.hpp"
#include "hcband/perturbation.hpp"

using namespace hcband;

namespace {

// Hand-sized chi-div space: identity coefficient frame, K_Y = (1, 2), one
// mode with a constant offset along e_1 and one with none. The pencil and
// the permeability then have closed forms: betas {1.25, 0.5}, a single
// pole at 0.8, and det mu vanishing exactly at nu = 1.
ChiDivSpace toy_space() {
  ChiDivSpace space;
  space.w2_coeffs = Mat::Identity(2, 2);
  space.K_Y = RVec(2);
  space.K_Y << 1.0, 2.0;
  space.consts = Eigen::Matrix3Xcd::Zero(3, 2);
  space.consts(0, 0) = 0.5;
  return space;
}

// The default geometry solved at alpha = 0, shared across the test cases.
struct PeriodicModel {
  RunConfig cfg;
  PlaneWaveBasis basis;
  StructuralSpectrum snapped;
  ChiDivSpace space;
  ResonanceModes modes;
};

const PeriodicModel& periodic_model() {
  static const PeriodicModel model = [] {
    PeriodicModel m;
    m.cfg = default_config();
    m.basis = build_basis({Vec3::Zero()}, m.cfg.cutoff_N);
    const GramPair gram = assemble_gram(m.basis, m.cfg.shape);
    m.snapped = snap_spectrum(solve_structural(gram), m.cfg.delta_snap);
    m.space = build_chi_div(m.snapped, m.basis, m.cfg.shape);
    m.modes = solve_resonances(m.space);
    return m;
  }();
  return model;
}

}  // namespace

TEST_CASE("toy chi-div space: closed-form resonances, pole and root") {
  const ChiDivSpace space = toy_space();
  REQUIRE(space.size() == 2);
  const ResonanceModes modes = solve_resonances(space);

  REQUIRE(modes.betas.size() == 2);
  CHECK(modes.betas[0] == doctest::Approx(1.25).epsilon(1e-13));
  CHECK(modes.betas[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(!modes.zero_mean[0]);
  CHECK(modes.zero_mean[1]);
  CHECK(modes.moments.col(0).norm() ==
        doctest::Approx(0.5 / std::sqrt(1.25)).epsilon(1e-12));

  const std::vector<double> poles = mu_poles(modes);
  REQUIRE(poles.size() == 1);
  CHECK(poles[0] == doctest::Approx(0.8).epsilon(1e-13));

  // mu_11(nu) = 1 + 0.2 nu/(0.8 - nu), so det mu = 0 exactly at nu = 1.
  const RootScan scan = find_roots(modes);
  REQUIRE(scan.roots.size() == 1);
  CHECK(scan.roots[0] == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(scan.roots_per_interval.size() == 1);
  CHECK(scan.roots_per_interval[0] == 1);

  CHECK(spectral_function(modes, 0.4) ==
        doctest::Approx(1.0 + 0.2 * 0.4 / 0.4).epsilon(1e-12));
  CHECK_THROWS_AS(effective_mu(modes, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(find_roots(modes, 3), std::invalid_argument);
}

TEST_CASE("chi-div construction guards") {
  const PeriodicModel& m = periodic_model();

  StructuralSpectrum unsnapped = m.snapped;
  unsnapped.snapped = false;
  CHECK_THROWS_AS(build_chi_div(unsnapped, m.basis, m.cfg.shape),
                  numerical_error);

  // Quasimomentum must vanish on both sides.
  const PlaneWaveBasis off_basis = build_basis({Vec3(1.0, 0.0, 0.0)}, 1);
  CHECK_THROWS_AS(build_chi_div(m.snapped, off_basis, m.cfg.shape),
                  unsupported_error);

  // Dimensions must agree.
  const PlaneWaveBasis small = build_basis({Vec3::Zero()}, 1);
  CHECK_THROWS_AS(build_chi_div(m.snapped, small, m.cfg.shape),
                  std::invalid_argument);

  // No curl-free-in-host block, no periodic limit.
  StructuralSpectrum no_w2 = m.snapped;
  for (int i : no_w2.split.w2) {
    no_w2.lambdas[i] = 0.9;
    no_w2.mus[i] = 0.5 - 0.9;
    no_w2.split.w3.push_back(i);
  }
  no_w2.split.w2.clear();
  CHECK_THROWS_AS(build_chi_div(no_w2, m.basis, m.cfg.shape), numerical_error);
}

TEST_CASE("periodic resonances of the reference sphere") {
  const PeriodicModel& m = periodic_model();
  const int q = m.space.size();
  REQUIRE(q == static_cast<int>(m.snapped.split.w2.size()));
  REQUIRE(q > 0);

  for (int i = 0; i < q; ++i) {
    CHECK(m.modes.betas[i] > 0.0);
    if (i + 1 < q) CHECK(m.modes.betas[i] >= m.modes.betas[i + 1]);
    const bool small_moment = m.modes.moments.col(i).norm() < 1e-8;
    CHECK(m.modes.zero_mean[static_cast<size_t>(i)] == small_moment);
  }

  // The centered sphere couples to constants through its dipole resonances:
  // at least one family of modes carries a nonzero cell average.
  REQUIRE(!mu_poles(m.modes).empty());
}

TEST_CASE("effective permeability: identity at zero, cubic isotropy") {
  const PeriodicModel& m = periodic_model();

  // nu = 0 contributes nothing: mu is the exact identity and S(0) = 1.0
  // without rounding.
  const Mat3 at_zero = effective_mu(m.modes, 0.0);
  CHECK((at_zero - Mat3::Identity()).norm() == 0.0);
  CHECK(spectral_function(m.modes, 0.0) == 1.0);

  const std::vector<double> poles = mu_poles(m.modes);
  std::vector<double> probes = {0.5 * poles.front()};
  for (size_t i = 0; i + 1 < poles.size(); ++i)
    probes.push_back(0.5 * (poles[i] + poles[i + 1]));
  probes.push_back(1.5 * poles.back());

  for (double nu : probes) {
    const Mat3 mu = effective_mu(m.modes, nu);
    CHECK((mu - mu.adjoint()).norm() <= 1e-12 * mu.norm());
    double offdiag = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (r != c) offdiag = std::max(offdiag, std::abs(mu(r, c)));
    CHECK(offdiag <= 1e-8 * mu.norm());
    // Isotropy: equal diagonal entries.
    CHECK(std::abs(mu(0, 0) - mu(1, 1)) <= 1e-8 * mu.norm());
    CHECK(std::abs(mu(1, 1) - mu(2, 2)) <= 1e-8 * mu.norm());
  }
}

TEST_CASE("spectral function: interlacing and the union identity") {
  const PeriodicModel& m = periodic_model();
  const RootScan scan = find_roots(m.modes);
  REQUIRE(!scan.poles.empty());
  REQUIRE(scan.roots_per_interval.size() == scan.poles.size());

  // Exactly one root strictly between consecutive poles.
  for (size_t i = 0; i + 1 < scan.poles.size(); ++i) {
    CHECK(scan.roots_per_interval[i] == 1);
    CHECK(scan.roots[i] > scan.poles[i]);
    CHECK(scan.roots[i] < scan.poles[i + 1]);
  }

  // tr(mu)/3 increases between poles (scalar s(nu) with positive slope).
  for (size_t i = 0; i + 1 < scan.poles.size(); ++i) {
    const double lo = scan.poles[i] * (1.0 + 1e-6);
    const double hi = scan.poles[i + 1] * (1.0 - 1e-6);
    double prev = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 16; ++j) {
      const double nu = lo + (hi - lo) * j / 16.0;
      const double s = std::real(effective_mu(m.modes, nu).trace()) / 3.0;
      CHECK(s >= prev - 1e-9 * (1.0 + std::abs(s)));
      prev = s;
    }
  }

  // sigma(A(0)) \ {0} = {zero-mean betas} union {1/roots}, as value sets.
  const UnionCheck check = spectrum_union_check(m.snapped, m.modes);
  CHECK(check.pass);
  CHECK(check.hausdorff <= 1e-6);
  CHECK(check.clusters_a0 == check.clusters_union);
}
