#include "hcband/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "hcband/basis.hpp"
#include "hcband/exports.hpp"
#include "hcband/numerics.hpp"
#include "hcband/operators.hpp"
#include "hcband/periodic_limit.hpp"
#include "hcband/perturbation.hpp"
#include "hcband/quasistatic.hpp"

#include "../vendor/json.hpp"

namespace hcband {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string one_metric(const char* name, double value, double limit) {
  char buf[120];
  std::snprintf(buf, sizeof buf, "%s=%.3e (limit %.1e)", name, value, limit);
  return buf;
}

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return Complex(re, im);
}

// The acceptance criteria share three solved models (the configured
// geometry at three quasimomenta) and, between the series and separation
// checks, one eigenvalue group. Every criterion is timed on its own and a
// thrown exception fails just that criterion.
struct Suite {
  const RunConfig& cfg;
  int threads;
  Clock::time_point t0 = Clock::now();
  ValidationReport report;

  SolvedModel m_unit;    // alpha = (1, 0, 0)
  SolvedModel m_corner;  // alpha = (pi, pi, pi)
  SolvedModel m_zero;    // alpha = 0

  std::optional<EigenvalueGroup> group;
  std::optional<SeriesExpansion> series;

  Suite(const RunConfig& c, int t) : cfg(c), threads(t) {
    m_unit = solve_model(cfg, Vec3(1.0, 0.0, 0.0));
    m_corner = solve_model(cfg, Vec3(M_PI, M_PI, M_PI));
    m_zero = solve_model(cfg, Vec3::Zero());
  }

  void run(int id, const std::string& name,
           const std::function<bool(std::string&)>& body) {
    CriterionResult res;
    res.id = id;
    res.name = name;
    const Clock::time_point start = Clock::now();
    try {
      res.pass = body(res.detail);
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = seconds_since(start);
    report.criteria.push_back(res);
  }

  EigenvalueGroup selected_group() {
    if (!group) {
      const SpectrumA0 a0 = spectrum_A0(m_unit.snapped, cfg.tol.cluster);
      group = choose_contour(a0, cfg.series.group_index);
    }
    return *group;
  }

  // 1. Assembled two-phase form vs its reconstruction from the structural
  //    eigenpairs, at random complex contrasts.
  bool reconstruction(std::string& detail) {
    std::mt19937_64 rng(20260816ull);
    std::uniform_real_distribution<double> re(1.0, 100.0);
    std::uniform_real_distribution<double> im(-50.0, 50.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Complex k(re(rng), im(rng));
      const Mat direct = assemble_Bk_direct(m_unit.gram, k);
      const Mat spectral = reconstruct_Bk_spectral(m_unit.spectrum, k);
      worst = std::max(worst, (direct - spectral).norm() / direct.norm());
    }
    detail = one_metric("max_rel", worst, 1e-10);
    return worst <= 1e-10;
  }

  // 2. Structural eigenvalues in [0, 1], mu in [-1/2, 1/2], at the three
  //    reference quasimomenta.
  bool spectral_bounds(std::string& detail) {
    const double tol = 1e-10;
    double worst = 0.0;
    for (const SolvedModel* m : {&m_unit, &m_corner, &m_zero}) {
      const RVec& l = m->spectrum.lambdas;
      const RVec& mu = m->spectrum.mus;
      worst = std::max(worst, -l.minCoeff());
      worst = std::max(worst, l.maxCoeff() - 1.0);
      worst = std::max(worst, -0.5 - mu.minCoeff());
      worst = std::max(worst, mu.maxCoeff() - 0.5);
    }
    detail = one_metric("max_overshoot", std::max(worst, 0.0), tol);
    return worst <= tol;
  }

  // 3. Bloch eigenvalues by direct assembly vs through the inverse family,
  //    matched as value sets.
  bool dual_route(std::string& detail) {
    const Complex ks[4] = {5.0, 20.0, 100.0, Complex(5.0, 5.0)};
    double worst = 0.0;
    for (const Complex& k : ks) {
      const BlochSpectrum direct = bloch_eigenvalues(m_unit.gram, k);
      const BlochSpectrum inverse = bloch_eigenvalues(m_unit.spectrum, k);
      for (int i = 0; i < direct.xi.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < inverse.xi.size(); ++j)
          best = std::min(best, std::abs(direct.xi[i] - inverse.xi[j]));
        worst = std::max(worst, best / std::max(1.0, std::abs(direct.xi[i])));
      }
    }
    detail = one_metric("max_rel", worst, 1e-8);
    return worst <= 1e-8;
  }

  // 4. Taylor coefficient matrices of the inverse family vs Cauchy
  //    integrals of A(z) on |z| = |z*|/2.
  bool taylor_vs_cauchy(std::string& detail) {
    const PoleSet poles = pole_set(m_unit.snapped);
    const double rc = 0.5 * std::abs(poles.z_star_alpha);
    const int Mc = 64;
    const int n_max = 5;
    const int dim = m_unit.snapped.Psi.rows();
    std::vector<Mat> acc(n_max, Mat::Zero(dim, dim));
    for (int l = 0; l < Mc; ++l) {
      const Complex zl = rc * std::exp(Complex(0.0, 2.0 * M_PI * l / Mc));
      const Mat Az = A_of_z(m_unit.snapped, zl);
      Complex zpow = 1.0;
      for (int n = 1; n <= n_max; ++n) {
        zpow /= zl;
        acc[static_cast<size_t>(n - 1)] += (zpow / double(Mc)) * Az;
      }
    }
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      const Mat an = a_n_matrix(m_unit.snapped, n);
      worst = std::max(
          worst, (acc[static_cast<size_t>(n - 1)] - an).norm() / an.norm());
    }
    detail = one_metric("max_rel", worst, 1e-8);
    return worst <= 1e-8;
  }

  // 5. Truncation certificates: observed remainder below the certified
  //    bound on the sampling grid, with the expected geometric decay.
  bool series_certificates(std::string& detail) {
    const Clock::time_point start = Clock::now();
    const EigenvalueGroup g = selected_group();
    series = series_coefficients(m_unit.snapped, g, 6, cfg.series.quadrature_M);
    const double r_star = series->r_star;
    const double floor = 1e-13 * std::max(1.0, std::abs(g.beta0));
    double worst_excess = 0.0;  // observed / bound
    double worst_ratio = 0.0;   // decay-rate margin
    // Near 0.9 r* the group eigenvalues approach the contour and the
    // trapezoid aliasing decays only like (0.9)^M, so the reference means
    // use a finer quadrature than the series contour needs. The extra
    // nodes only touch the O(dim * M) filter sums.
    const int mean_M = std::max(cfg.series.quadrature_M, 512);
    for (Complex z : certificate_grid(r_star)) {
      const FamilyEig eig =
          evaluate_A(m_unit.snapped, z, /*with_vectors=*/false);
      const Complex mean = weighted_mean(eig, g, mean_M);
      const double rate = std::abs(z) / r_star + 0.05;
      Complex partial = 0.0;
      Complex zpow = 1.0;
      double prev = -1.0;
      for (int p = 0; p <= 6; ++p) {
        partial += series->coeffs[static_cast<size_t>(p)] * zpow;
        zpow *= z;
        const double observed = std::abs(mean - partial);
        const double bound = error_bound(p, z, g.d, r_star);
        worst_excess = std::max(worst_excess, observed / bound);
        if (p > 0 && prev > floor)
          worst_ratio = std::max(worst_ratio, observed / prev / rate);
        prev = observed;
      }
    }
    const double sec = seconds_since(start);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max_observed/bound=%.3e, max_decay_excess=%.3e (limit 1)",
                  worst_excess, worst_ratio);
    detail = buf;
    return worst_excess <= 1.0 && worst_ratio <= 1.0 && sec <= 120.0;
  }

  // 6. The group contour stays in the resolvent set on the same grid and
  //    the Riesz projection is an idempotent of the right trace.
  bool separation(std::string& detail) {
    const EigenvalueGroup g = selected_group();
    const double r_star = radius_r_star(m_unit.snapped.alpha, g.d,
                                        m_unit.snapped.mu_minus);
    // The idempotency target is far below the (0.9)^M aliasing floor of the
    // coarse series contour, so the projection check gets its own M.
    const SeparationReport rep =
        verify_separation(m_unit.snapped, g, certificate_grid(r_star),
                          std::max(cfg.series.quadrature_M, 1024));
    double worst_idem = 0.0, worst_trace = 0.0;
    bool clear = true;
    for (const SeparationSample& s : rep.samples) {
      worst_idem = std::max(worst_idem, s.idempotency);
      worst_trace = std::max(worst_trace, s.trace_deviation);
      clear = clear && s.contour_clear;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "contour_clear=%s, max||P^2-P||=%.3e, max|trP-m|=%.3e "
                  "(limits 1e-8)",
                  clear ? "yes" : "no", worst_idem, worst_trace);
    detail = buf;
    return rep.all_pass;
  }

  // 7. Operator-norm increment of the family on the negative real segment
  //    against its closed-form bound.
  bool shift_bound(std::string& detail) {
    const PoleSet poles = pole_set(m_unit.snapped);
    const double zs = std::abs(poles.z_star_alpha);
    const Mat A0 = A_of_z(m_unit.snapped, 0.0);
    double worst = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double z = -0.9 * zs * j / 21.0;
      const Mat Az = A_of_z(m_unit.snapped, z);
      const double nrm = operator_norm(Az - A0);
      const double bnd =
          a_family_shift_bound(m_unit.snapped.alpha, m_unit.snapped.mu_minus, z);
      worst = std::max(worst, nrm / bnd);
    }
    detail = one_metric("max_norm/bound", worst, 1.0);
    return worst <= 1.0;
  }

  // 8. Discrete Poincare inequality on random coefficient vectors and the
  //    per-mode curl Gram identity of the polarization frame.
  bool poincare(std::string& detail) {
    std::mt19937_64 rng(8ull);
    double worst = 0.0;
    for (const SolvedModel* m : {&m_unit, &m_zero}) {
      const double a = m->basis.quasimomentum.is_zero()
                           ? 4.0 * M_PI * M_PI
                           : m->basis.quasimomentum.alpha.squaredNorm();
      const int dim = m->basis.size();
      for (int t = 0; t < 1000; ++t) {
        CVec c(dim);
        for (int i = 0; i < dim; ++i) c[i] = random_complex(rng);
        const double l2sq = c.squaredNorm();
        double curlsq = 0.0;
        for (int i = 0; i < dim; ++i)
          curlsq += m->gram.K_Y[i] * std::norm(c[i]);
        worst = std::max(worst, l2sq * a / curlsq - 1.0);
      }
      for (int i = 0; i + 1 < dim; i += 2) {
        const BasisElement& e1 = m->basis.elements[static_cast<size_t>(i)];
        const BasisElement& e2 = m->basis.elements[static_cast<size_t>(i + 1)];
        const double k2 = e1.kappa.squaredNorm();
        const Vec3 c1 = e1.kappa.cross(e1.e_hat);
        const Vec3 c2 = e2.kappa.cross(e2.e_hat);
        worst = std::max(worst, std::abs(c1.dot(c1) - k2) / k2);
        worst = std::max(worst, std::abs(c2.dot(c2) - k2) / k2);
        worst = std::max(worst, std::abs(c1.dot(c2)) / k2);
        // The longitudinal direction is curl-free: kappa x kappa_hat = 0.
        const Vec3 grad = e1.kappa.cross(e1.kappa.normalized());
        worst = std::max(worst, grad.norm() / std::sqrt(k2));
      }
    }
    detail = one_metric("max_violation", std::max(worst, 0.0), 1e-12);
    return worst <= 1e-12;
  }

  // 9. Helmholtz splitting of random trigonometric fields: exact
  //    recombination, per-mode alignment, L2 orthogonality, and the
  //    constant part at alpha = 0.
  bool helmholtz(std::string& detail) {
    std::mt19937_64 rng(9ull);
    std::uniform_int_distribution<int> di(-2, 2);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      RawVectorField f;
      f.quasimomentum.alpha = t < 50 ? Vec3(1.0, 0.0, 0.0) : Vec3::Zero();
      const bool zero_mode = t >= 50;
      for (int s = 0; s < 12; ++s) {
        const std::array<int, 3> n = {di(rng), di(rng), di(rng)};
        if (f.quasimomentum.is_zero() && n == std::array<int, 3>{0, 0, 0})
          continue;
        CVec3 h;
        for (int i = 0; i < 3; ++i) h[i] = random_complex(rng);
        f.fourier[n] = h;
      }
      if (zero_mode) {
        CVec3 h;
        for (int i = 0; i < 3; ++i) h[i] = random_complex(rng);
        f.fourier[{0, 0, 0}] = h;
      }

      const HelmholtzParts parts = helmholtz_decompose(f);
      auto lookup = [](const RawVectorField& g, const std::array<int, 3>& n) {
        const auto it = g.fourier.find(n);
        return it == g.fourier.end() ? CVec3(CVec3::Zero()) : it->second;
      };
      double pot_sq = 0.0, curl_sq = 0.0;
      Complex cross_inner = 0.0;
      for (const auto& [n, h] : f.fourier) {
        const CVec3 p = lookup(parts.pot, n);
        const CVec3 c = lookup(parts.curl, n);
        CVec3 sum = p + c;
        if (f.quasimomentum.is_zero() && n == std::array<int, 3>{0, 0, 0})
          sum += parts.const_part;
        worst = std::max(worst, (sum - h).norm() / h.norm());
        const Vec3 kap = 2.0 * M_PI * Vec3(n[0], n[1], n[2]) +
                         f.quasimomentum.alpha;
        if (kap.norm() > 0.0) {
          const CVec3 kc = kap.cast<Complex>();
          if (p.norm() > 0.0)
            worst = std::max(worst,
                             kc.cross(p).norm() / (kap.norm() * p.norm()));
          if (c.norm() > 0.0)
            worst = std::max(worst,
                             std::abs(kc.dot(c)) / (kap.norm() * c.norm()));
        }
        pot_sq += p.squaredNorm();
        curl_sq += c.squaredNorm();
        cross_inner += p.dot(c);
      }
      if (pot_sq > 0.0 && curl_sq > 0.0)
        worst = std::max(worst, std::abs(cross_inner) /
                                    std::sqrt(pot_sq * curl_sq));
    }
    detail = one_metric("max_residual", worst, 1e-12);
    return worst <= 1e-12;
  }

  // 10. Periodic resonance limit at alpha = 0: pole/root interlacing,
  //     monotone trace between poles, the spectrum union identity,
  //     normalization det mu(0) = 1, and cubic isotropy.
  bool periodic_limit(std::string& detail) {
    const ChiDivSpace space =
        build_chi_div(m_zero.snapped, m_zero.basis, cfg.shape);
    const ResonanceModes modes =
        solve_resonances(space, cfg.tol.eig_residual, cfg.tol.moment);
    const RootScan scan = find_roots(modes);

    bool interlaced = !scan.roots_per_interval.empty();
    for (int c : scan.roots_per_interval) interlaced = interlaced && c == 1;

    // Sampling intervals: below the first pole, between consecutive poles,
    // and one pole-width past the last.
    std::vector<std::pair<double, double>> intervals;
    if (!scan.poles.empty()) {
      intervals.emplace_back(0.02 * scan.poles.front(),
                             0.98 * scan.poles.front());
      for (size_t i = 0; i + 1 < scan.poles.size(); ++i)
        intervals.emplace_back(scan.poles[i], scan.poles[i + 1]);
      intervals.emplace_back(scan.poles.back(), 2.0 * scan.poles.back());
    }
    bool monotone = true;
    double worst_offdiag = 0.0;
    for (const auto& [lo, hi] : intervals) {
      double prev = 0.0;
      for (int j = 0; j < 16; ++j) {
        const double nu = lo + (j + 0.5) * (hi - lo) / 16.0;
        const Mat3 mu = effective_mu(modes, nu);
        const double lam = mu.trace().real() / 3.0;
        if (j > 0 && lam <= prev - 1e-9 * (1.0 + std::abs(prev)))
          monotone = false;
        prev = lam;
        double off = 0.0;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            if (r != c) off = std::max(off, std::abs(mu(r, c)));
        worst_offdiag = std::max(worst_offdiag, off / mu.norm());
      }
    }

    const UnionCheck uc = spectrum_union_check(m_zero.snapped, modes);
    const double s0_err = std::abs(spectral_function(modes, 0.0) - 1.0);

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "interlaced=%s, monotone=%s, union=%.3e (limit 1e-6), "
                  "|S(0)-1|=%.1e, offdiag=%.3e (limit 1e-8)",
                  interlaced ? "yes" : "no", monotone ? "yes" : "no",
                  uc.hausdorff, s0_err, worst_offdiag);
    detail = buf;
    return interlaced && monotone && uc.pass && s0_err == 0.0 &&
           worst_offdiag <= 1e-8;
  }

  // 11. Closed-form reference values of the buffered-sphere constants and
  //     the certified radius.
  bool closed_forms(std::string& detail) {
    double worst = 0.0;
    worst = std::max(worst, std::abs(c_l_coefficient(1.0, 2.0, 1) - 5.0 / 7.0));
    worst =
        std::max(worst, std::abs(c_l_coefficient(1.0, 2.0, 2) - 67.0 / 93.0));
    std::mt19937_64 rng(11ull);
    std::uniform_real_distribution<double> da(0.05, 0.35);
    std::uniform_real_distribution<double> db(0.05, 0.45);
    double theta_excess = 0.0;
    for (int t = 0; t < 10; ++t) {
      BufferedGeometry geom;
      geom.a = da(rng);
      geom.b = geom.a + db(rng);
      const ThetaResult th = theta_buffered_sphere(geom);
      theta_excess = std::max(
          theta_excess, th.theta_inv - c_l_majorant(geom.a, geom.b, 1));
    }
    QuasiMomentum unit;
    unit.alpha = Vec3(1.0, 0.0, 0.0);
    QuasiMomentum zero;
    const double r1 = radius_r_star(unit, 0.1, -0.25);
    const double r2 = radius_r_star(zero, 0.05, -0.25);
    const double r_err = std::max(std::abs(r1 - 0.023256),
                                  std::abs(r2 - 0.198949));
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "C_l_err=%.1e (limit 1e-12), theta_excess=%.1e, "
                  "r_star_err=%.3e (limit 1e-6)",
                  worst, theta_excess, r_err);
    detail = buf;
    return worst <= 1e-12 && theta_excess <= 1e-12 && r_err <= 1e-6;
  }

  // 12. Every artifact writer is deterministic byte for byte (the band
  //     sweep also across thread counts) and the whole suite fits the
  //     validation time budget.
  bool determinism(std::string& detail) {
    using nlohmann::json;
    json doc = json::parse(cfg.canonical);
    doc["alpha"] = json{{"point", {0.0, 0.0, 0.0}}};
    const RunConfig cfg_zero = parse_config(doc.dump());

    int mismatches = 0;
    auto same = [&mismatches](const std::string& a, const std::string& b) {
      if (a.empty() || a != b) ++mismatches;
    };
    same(structural_csv(cfg), structural_csv(cfg));
    same(bands_csv(cfg, threads), bands_csv(cfg, 1));
    same(series_json(cfg), series_json(cfg));
    same(effective_mu_json(cfg_zero), effective_mu_json(cfg_zero));
    same(radius_json(cfg), radius_json(cfg));

    const double total = seconds_since(t0);
    char buf[120];
    std::snprintf(buf, sizeof buf, "mismatched_artifacts=%d, suite=%.1f s "
                  "(limit 300)", mismatches, total);
    detail = buf;
    return mismatches == 0 && total <= 300.0;
  }
};

}  // namespace

ValidationReport run_acceptance_suite(const RunConfig& cfg, int threads) {
  Suite suite(cfg, threads);
  suite.run(1, "contrast reconstruction from structural pairs",
            [&](std::string& d) { return suite.reconstruction(d); });
  suite.run(2, "structural eigenvalue bounds",
            [&](std::string& d) { return suite.spectral_bounds(d); });
  suite.run(3, "dual-route Bloch spectra",
            [&](std::string& d) { return suite.dual_route(d); });
  suite.run(4, "Taylor coefficients vs Cauchy integrals",
            [&](std::string& d) { return suite.taylor_vs_cauchy(d); });
  suite.run(5, "series truncation certificates",
            [&](std::string& d) { return suite.series_certificates(d); });
  suite.run(6, "group separation on the certificate grid",
            [&](std::string& d) { return suite.separation(d); });
  suite.run(7, "family shift norm bound",
            [&](std::string& d) { return suite.shift_bound(d); });
  suite.run(8, "discrete Poincare inequality and curl Gram identity",
            [&](std::string& d) { return suite.poincare(d); });
  suite.run(9, "Helmholtz splitting of trigonometric fields",
            [&](std::string& d) { return suite.helmholtz(d); });
  suite.run(10, "periodic resonance limit",
            [&](std::string& d) { return suite.periodic_limit(d); });
  suite.run(11, "buffered-sphere closed forms",
            [&](std::string& d) { return suite.closed_forms(d); });
  suite.run(12, "deterministic artifacts",
            [&](std::string& d) { return suite.determinism(d); });

  suite.report.all_pass = true;
  for (const CriterionResult& c : suite.report.criteria)
    suite.report.all_pass = suite.report.all_pass && c.pass;
  suite.report.total_seconds = seconds_since(suite.t0);
  return suite.report;
}

std::string validation_table(const ValidationReport& report) {
  std::ostringstream out;
  for (const CriterionResult& c : report.criteria) {
    char line[400];
    std::snprintf(line, sizeof line, "[%2d] %s  %-48s %8.2f s  %s\n", c.id,
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                  c.detail.c_str());
    out << line;
  }
  int passed = 0;
  for (const CriterionResult& c : report.criteria) passed += c.pass ? 1 : 0;
  char line[160];
  std::snprintf(line, sizeof line, "%d/%d criteria passed in %.1f s\n", passed,
                static_cast<int>(report.criteria.size()),
                report.total_seconds);
  out << line;
  return out.str();
}

std::string validation_json(const ValidationReport& report) {
  nlohmann::json doc;
  doc["tool"] = version_string;
  nlohmann::json rows = nlohmann::json::array();
  for (const CriterionResult& c : report.criteria)
    rows.push_back(nlohmann::json{{"id", c.id},
                                  {"name", c.name},
                                  {"pass", c.pass},
                                  {"seconds", c.seconds},
                                  {"detail", c.detail}});
  doc["criteria"] = rows;
  doc["all_pass"] = report.all_pass;
  doc["total_seconds"] = report.total_seconds;
  return doc.dump(2) + "\n";
}

}  // namespace hcband
