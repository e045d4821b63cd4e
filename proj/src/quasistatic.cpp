#include "hcband/quasistatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "hcband/numerics.hpp"

namespace hcband {

namespace {

// Dense cache of chi_hat_D over the difference lattice |q|_inf <= 2N.
struct IndicatorTable {
  int range = 0;
  std::vector<Complex> values;

  IndicatorTable(const InclusionShape& shape, int N) : range(2 * N) {
    const int side = 2 * range + 1;
    values.resize(static_cast<std::size_t>(side) * side * side);
    for (int q1 = -range; q1 <= range; ++q1)
      for (int q2 = -range; q2 <= range; ++q2)
        for (int q3 = -range; q3 <= range; ++q3)
          values[index(Vec3i(q1, q2, q3))] =
              indicator_fourier(shape, Vec3i(q1, q2, q3));
  }

  std::size_t index(const Vec3i& q) const {
    const int side = 2 * range + 1;
    return (static_cast<std::size_t>(q[0] + range) * side +
            static_cast<std::size_t>(q[1] + range)) *
               side +
           static_cast<std::size_t>(q[2] + range);
  }

  Complex operator()(const Vec3i& q) const { return values[index(q)]; }
};

}  // namespace

GramPair assemble_gram(const PlaneWaveBasis& basis, const InclusionShape& shape) {
  validate_shape(shape);
  const int dim = basis.size();
  GramPair gram;
  gram.alpha = basis.quasimomentum;
  gram.K_Y.resize(dim);
  gram.K_D.resize(dim, dim);

  std::vector<Vec3> curls(dim);
  for (int m = 0; m < dim; ++m) {
    const BasisElement& el = basis.elements[m];
    curls[m] = el.kappa.cross(el.e_hat);
    gram.K_Y[m] = el.kappa.squaredNorm();
  }

  IndicatorTable chi(shape, basis.cutoff);
  // Lower triangle plus diagonal; the upper triangle is the exact conjugate
  // because chi_hat(-q) = conj(chi_hat(q)) holds bitwise for this evaluator.
  for (int j = 0; j < dim; ++j) {
    for (int i = j; i < dim; ++i) {
      const double polarization = curls[i].dot(curls[j]);
      const Complex entry =
          polarization * chi(basis.elements[j].n - basis.elements[i].n);
      gram.K_D(i, j) = entry;
      if (i != j) gram.K_D(j, i) = std::conj(entry);
    }
  }
  return gram;
}

StructuralSpectrum solve_structural(const GramPair& gram, double residual_tol) {
  StructuralSpectrum spec;
  spec.alpha = gram.alpha;
  spec.K_Y = gram.K_Y;
  HermitianEig eig = hermitian_generalized_eig(gram.K_D, gram.K_Y, residual_tol);
  spec.lambdas = eig.values;
  spec.Psi = eig.vectors;
  spec.mus = RVec::Constant(spec.lambdas.size(), 0.5) - spec.lambdas;
  spec.mu_minus = spec.mus.minCoeff();
  spec.mu_plus = spec.mus.maxCoeff();
  return spec;
}

StructuralSpectrum snap_spectrum(const StructuralSpectrum& spec,
                                 double delta_snap) {
  if (!(delta_snap > 0.0 && delta_snap < 0.25))
    throw config_error("delta_snap must lie in (0, 1/4)");

  StructuralSpectrum out = spec;
  out.snapped = true;
  SubspaceSplit& split = out.split;
  split = SubspaceSplit{};
  split.delta_snap = delta_snap;

  const int dim = static_cast<int>(spec.lambdas.size());
  for (int i = 0; i < dim; ++i) {
    const double lambda = spec.lambdas[i];
    if (lambda < delta_snap) {
      split.w1.push_back(i);
      out.lambdas[i] = 0.0;
    } else if (lambda > 1.0 - delta_snap) {
      split.w2.push_back(i);
      out.lambdas[i] = 1.0;
    } else {
      split.w3.push_back(i);
    }
  }
  out.mus = RVec::Constant(dim, 0.5) - out.lambdas;

  if (split.w3.empty())
    throw numerical_error(
        "snap_spectrum: every eigenvalue was snapped; no interior block left");

  double w3_min = std::numeric_limits<double>::infinity();
  double w3_max = -std::numeric_limits<double>::infinity();
  for (int i : split.w3) {
    w3_min = std::min(w3_min, spec.lambdas[i]);
    w3_max = std::max(w3_max, spec.lambdas[i]);
  }
  split.gap_w1 = w3_min;         // distance from the w3 block down to 0
  split.gap_w2 = 1.0 - w3_max;   // distance from the w3 block up to 1

  // An interior eigenvalue this close to a snap boundary could land on
  // either side under rounding; flag it so the user rechecks delta_snap.
  const double margin = 10.0 * std::numeric_limits<double>::epsilon();
  for (int i : split.w3) {
    const double lambda = spec.lambdas[i];
    if (lambda - delta_snap <= margin ||
        (1.0 - delta_snap) - lambda <= margin) {
      std::ostringstream msg;
      msg << "lambda[" << i << "] = " << lambda
          << " lies within 10 eps of the snap threshold " << delta_snap;
      split.warnings.push_back(msg.str());
    }
  }

  out.mu_minus = 0.5 - w3_max;
  out.mu_plus = 0.5 - w3_min;
  return out;
}

PoleSet pole_set(const StructuralSpectrum& snapped) {
  if (!snapped.snapped)
    throw numerical_error("pole_set requires a snapped spectrum");
  PoleSet poles;
  poles.S.reserve(snapped.split.w3.size());
  for (int i : snapped.split.w3) {
    const double mu = snapped.mus[i];
    poles.S.push_back((mu + 0.5) / (mu - 0.5));
  }
  std::sort(poles.S.begin(), poles.S.end());
  if (poles.S.empty())
    throw numerical_error("pole_set: empty interior block");
  poles.z_star_alpha = poles.S.back();
  return poles;
}

}  // namespace hcband
