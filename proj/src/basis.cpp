#include "hcband/basis.hpp"

#include <cmath>

namespace hcband {

void validate_quasimomentum(const QuasiMomentum& q) {
  for (int d = 0; d < 3; ++d)
    if (!(q.alpha[d] > -M_PI && q.alpha[d] <= M_PI))
      throw config_error("quasimomentum component outside (-pi, pi]");
}

namespace {

// Deterministic polarization pair orthogonal to kappa.
std::pair<Vec3, Vec3> polarizations(const Vec3& kappa) {
  Vec3 a(1.0, 0.0, 0.0);
  if (kappa.cross(a).norm() < 1e-8 * kappa.norm()) a = Vec3(0.0, 1.0, 0.0);
  const Vec3 e1 = kappa.cross(a).normalized();
  const Vec3 e2 = kappa.cross(e1).normalized();
  return {e1, e2};
}

}  // namespace

PlaneWaveBasis build_basis(const QuasiMomentum& alpha, int N) {
  validate_quasimomentum(alpha);
  if (N < 0) throw std::invalid_argument("build_basis: N >= 0 required");
  PlaneWaveBasis basis;
  basis.quasimomentum = alpha;
  basis.cutoff = N;
  const bool skip_zero = alpha.is_zero();
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n2 = -N; n2 <= N; ++n2)
      for (int n3 = -N; n3 <= N; ++n3) {
        if (skip_zero && n1 == 0 && n2 == 0 && n3 == 0) continue;
        const Vec3i n(n1, n2, n3);
        const Vec3 kappa = 2.0 * M_PI * n.cast<double>() + alpha.alpha;
        const auto [e1, e2] = polarizations(kappa);
        basis.elements.push_back({n, 1, kappa, e1});
        basis.elements.push_back({n, 2, kappa, e2});
      }
  return basis;
}

RawVectorField to_raw(const FieldCoefficients& field) {
  RawVectorField raw;
  raw.quasimomentum = field.basis->quasimomentum;
  for (int m = 0; m < field.basis->size(); ++m) {
    const BasisElement& el = field.basis->elements[static_cast<size_t>(m)];
    const std::array<int, 3> key{el.n[0], el.n[1], el.n[2]};
    auto [it, inserted] = raw.fourier.try_emplace(key, CVec3::Zero());
    it->second += field.coeffs(m) * el.e_hat.cast<Complex>();
  }
  return raw;
}

double l2_norm(const FieldCoefficients& field) { return field.coeffs.norm(); }

double curl_norm(const FieldCoefficients& field) {
  double sum = 0.0;
  for (int m = 0; m < field.basis->size(); ++m) {
    const BasisElement& el = field.basis->elements[static_cast<size_t>(m)];
    sum += el.kappa.squaredNorm() * std::norm(field.coeffs(m));
  }
  return std::sqrt(sum);
}

Complex energy_inner(const FieldCoefficients& u, const FieldCoefficients& v) {
  if (u.basis != v.basis)
    throw std::invalid_argument("energy_inner: fields on different bases");
  Complex sum = 0.0;
  for (int m = 0; m < u.basis->size(); ++m)
    sum += u.basis->elements[static_cast<size_t>(m)].kappa.squaredNorm() *
           u.coeffs(m) * std::conj(v.coeffs(m));
  return sum;
}

Complex l2_inner(const FieldCoefficients& u, const FieldCoefficients& v) {
  if (u.basis != v.basis)
    throw std::invalid_argument("l2_inner: fields on different bases");
  return v.coeffs.dot(u.coeffs);  // Eigen's dot conjugates its callee
}

HelmholtzParts helmholtz_decompose(const RawVectorField& field) {
  HelmholtzParts parts;
  parts.pot.quasimomentum = field.quasimomentum;
  parts.curl.quasimomentum = field.quasimomentum;
  const bool zero_alpha = field.quasimomentum.is_zero();
  for (const auto& [key, coeff] : field.fourier) {
    const Vec3i n(key[0], key[1], key[2]);
    if (zero_alpha && n.isZero()) {
      parts.const_part = coeff;
      continue;
    }
    const Vec3 kappa =
        2.0 * M_PI * n.cast<double>() + field.quasimomentum.alpha;
    const CVec3 kc = kappa.cast<Complex>();
    const CVec3 parallel = kc * (kc.dot(coeff) / kappa.squaredNorm());
    parts.pot.fourier[key] = parallel;
    parts.curl.fourier[key] = coeff - parallel;
  }
  return parts;
}

double greens_multiplier(const QuasiMomentum& alpha, const Vec3i& n) {
  const Vec3 kappa = 2.0 * M_PI * n.cast<double>() + alpha.alpha;
  const double k2 = kappa.squaredNorm();
  if (k2 == 0.0)
    throw std::invalid_argument(
        "greens_multiplier: zero wavevector (alpha = 0, n = 0) excluded");
  return -1.0 / k2;
}

FieldCoefficients inverse_laplacian(const FieldCoefficients& field) {
  FieldCoefficients out{field.basis, field.coeffs};
  for (int m = 0; m < field.basis->size(); ++m)
    out.coeffs(m) /=
        field.basis->elements[static_cast<size_t>(m)].kappa.squaredNorm();
  return out;
}

namespace {

// Distance check of the axis-i edge path against every sphere.
void check_paths(const InclusionShape& shape) {
  const double d = geometric_average_offset;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    for (const Sphere& s : shape.spheres) {
      const double dj = s.center[j] - d;
      const double dk = s.center[k] - d;
      if (std::sqrt(dj * dj + dk * dk) <= s.radius)
        throw geometry_error(
            "geometric-average path along axis " + std::to_string(i + 1) +
            " intersects an inclusion");
    }
  }
}

}  // namespace

CVec3 geometric_average(const RawVectorField& field,
                        const InclusionShape& shape) {
  if (!field.quasimomentum.is_zero())
    throw unsupported_error("geometric average requires alpha = 0");
  check_paths(shape);
  const double d = geometric_average_offset;
  CVec3 avg = CVec3::Zero();
  for (const auto& [key, coeff] : field.fourier) {
    for (int i = 0; i < 3; ++i) {
      if (key[static_cast<size_t>(i)] != 0) continue;
      const int j = (i + 1) % 3;
      const int k = (i + 2) % 3;
      const double phase = 2.0 * M_PI * d *
                           (key[static_cast<size_t>(j)] +
                            key[static_cast<size_t>(k)]);
      avg[i] += coeff[i] * std::polar(1.0, phase);
    }
  }
  return avg;
}

CVec3 geometric_average(const FieldCoefficients& field,
                        const InclusionShape& shape) {
  return geometric_average(to_raw(field), shape);
}

}  // namespace hcband
