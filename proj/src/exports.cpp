#include "hcband/exports.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "hcband/numerics.hpp"
#include "hcband/operators.hpp"
#include "hcband/periodic_limit.hpp"
#include "hcband/perturbation.hpp"

#include "../vendor/json.hpp"

namespace hcband {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string hex64(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_metadata(const RunConfig& cfg) {
  std::ostringstream out;
  out << "# " << version_string << "\n"
      << "# config_hash: " << hex64(cfg.hash) << "\n"
      << "# geometry_hash: " << hex64(cfg.geometry_hash) << "\n"
      << "# basis_ordering: " << basis_ordering_version << "\n"
      << "# N: " << cfg.cutoff_N << "\n"
      << "# tolerances: eig_residual=" << fmt(cfg.tol.eig_residual)
      << " cluster=" << fmt(cfg.tol.cluster) << " moment=" << fmt(cfg.tol.moment)
      << "\n";
  return out.str();
}

json json_metadata(const RunConfig& cfg) {
  return json{{"tool", version_string},
              {"config_hash", hex64(cfg.hash)},
              {"geometry_hash", hex64(cfg.geometry_hash)},
              {"basis_ordering", basis_ordering_version},
              {"cutoff_N", cfg.cutoff_N},
              {"delta_snap", cfg.delta_snap},
              {"tolerances",
               {{"eig_residual", cfg.tol.eig_residual},
                {"cluster", cfg.tol.cluster},
                {"moment", cfg.tol.moment}}}};
}

Vec3 single_alpha(const RunConfig& cfg, const char* who) {
  if (cfg.alpha.mode == AlphaMode::path || cfg.alpha.points.size() != 1)
    throw config_error(std::string(who) + " requires a single alpha point");
  return cfg.alpha.points.front();
}

}  // namespace

SolvedModel solve_model(const RunConfig& cfg, const Vec3& alpha) {
  SolvedModel model;
  QuasiMomentum q;
  q.alpha = alpha;
  validate_quasimomentum(q);
  model.basis = build_basis(q, cfg.cutoff_N);
  model.gram = assemble_gram(model.basis, cfg.shape);
  model.spectrum = solve_structural(model.gram, cfg.tol.eig_residual);
  model.snapped = snap_spectrum(model.spectrum, cfg.delta_snap);
  return model;
}

std::vector<PathPoint> brillouin_path(int samples_per_leg) {
  if (samples_per_leg < 1)
    throw std::invalid_argument("brillouin_path: need samples_per_leg >= 1");
  const double eps = 1e-6;
  const Vec3 corners[4] = {Vec3(eps, eps, eps), Vec3(M_PI, 0.0, 0.0),
                           Vec3(M_PI, M_PI, 0.0), Vec3(M_PI, M_PI, M_PI)};
  std::vector<PathPoint> path;
  for (int leg = 0; leg < 3; ++leg)
    for (int i = 0; i < samples_per_leg; ++i) {
      const double t = static_cast<double>(i) / samples_per_leg;
      path.push_back(
          {leg + t, corners[leg] + t * (corners[leg + 1] - corners[leg])});
    }
  path.push_back({3.0, corners[3]});
  return path;
}

std::string structural_csv(const RunConfig& cfg) {
  std::vector<Vec3> alphas;
  if (cfg.alpha.mode == AlphaMode::path)
    throw config_error("structural output requires an alpha point or list");
  alphas = cfg.alpha.points;

  std::ostringstream out;
  out << csv_metadata(cfg);
  out << "index,lambda,mu,class\n";
  for (const Vec3& alpha : alphas) {
    const SolvedModel model = solve_model(cfg, alpha);
    out << "# alpha: " << fmt(alpha[0]) << " " << fmt(alpha[1]) << " "
        << fmt(alpha[2]) << "\n";
    std::vector<int> cls(static_cast<size_t>(model.spectrum.lambdas.size()), 3);
    for (int i : model.snapped.split.w1) cls[static_cast<size_t>(i)] = 1;
    for (int i : model.snapped.split.w2) cls[static_cast<size_t>(i)] = 2;
    for (int i = 0; i < model.spectrum.lambdas.size(); ++i)
      out << i << "," << fmt(model.spectrum.lambdas[i]) << ","
          << fmt(model.spectrum.mus[i]) << ",W" << cls[static_cast<size_t>(i)]
          << "\n";
  }
  return out.str();
}

std::string bands_csv(const RunConfig& cfg, int threads) {
  const int samples = cfg.alpha.samples_per_leg;
  const std::vector<PathPoint> path = brillouin_path(samples);
  std::vector<double> real_ks;
  for (Complex k : cfg.contrasts)
    if (k.imag() == 0.0) real_ks.push_back(k.real());

  // One job per path point: assemble the Gram pair once, then sweep the
  // real contrasts. Chunks are written by index, so the assembled file is
  // independent of scheduling.
  std::vector<std::string> chunks(path.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= path.size() || failed.load()) return;
        const PathPoint& pt = path[i];
        QuasiMomentum q;
        q.alpha = pt.alpha;
        const PlaneWaveBasis basis = build_basis(q, cfg.cutoff_N);
        const GramPair gram = assemble_gram(basis, cfg.shape);
        // The pencil is singular exactly at k = -lambda/(1 - lambda) <= 0,
        // so the flag test needs the structural spectrum only when the
        // sweep reaches into the nonpositive axis.
        std::optional<RVec> lambdas;
        const auto near_excluded = [&](double k) {
          if (k > 0.0) return false;
          if (!lambdas) lambdas = solve_structural(gram).lambdas;
          for (Eigen::Index j = 0; j < lambdas->size(); ++j) {
            const double lam = (*lambdas)[j];
            if (lam >= 1.0 - 1e-9) continue;  // pole off at -infinity
            if (std::abs(k + lam / (1.0 - lam)) <=
                1e-8 * (1.0 + std::abs(k)))
              return true;
          }
          return false;
        };
        std::ostringstream rows;
        for (double k : real_ks) {
          if (near_excluded(k)) {
            rows << "# excluded_contrast path_param=" << fmt(pt.param)
                 << " k=" << fmt(k) << "\n";
            continue;
          }
          Mat M = assemble_Bk_direct(gram, Complex(k, 0.0));
          Eigen::SelfAdjointEigenSolver<Mat> solver;
          solver.compute(M, Eigen::EigenvaluesOnly);
          if (solver.info() != Eigen::Success)
            throw numerical_error("band eigensolver failed");
          const RVec xi = solver.eigenvalues();
          const int count =
              std::min(cfg.bands.count, static_cast<int>(xi.size()));
          for (int b = 0; b < count; ++b)
            rows << fmt(pt.param) << "," << fmt(pt.alpha[0]) << ","
                 << fmt(pt.alpha[1]) << "," << fmt(pt.alpha[2]) << ","
                 << fmt(k) << "," << fmt(0.0) << "," << (b + 1) << ","
                 << fmt(xi[b]) << "," << fmt(0.0) << ","
                 << fmt(std::sqrt(std::max(0.0, xi[b]))) << "\n";
        }
        chunks[i] = rows.str();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true);
    }
  };

  const int n_threads =
      std::max(1, std::min(threads, static_cast<int>(path.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::ostringstream out;
  out << csv_metadata(cfg);
  out << "path_param,alpha_1,alpha_2,alpha_3,k_re,k_im,band,xi_re,xi_im,"
         "omega_over_c\n";
  for (const std::string& chunk : chunks) out << chunk;
  return out.str();
}

std::string series_json(const RunConfig& cfg) {
  const Vec3 alpha = single_alpha(cfg, "series output");
  const SolvedModel model = solve_model(cfg, alpha);
  const SpectrumA0 a0 = spectrum_A0(model.snapped, cfg.tol.cluster);
  const EigenvalueGroup group = choose_contour(a0, cfg.series.group_index);
  const SeriesExpansion series =
      series_coefficients(model.snapped, group, cfg.series.max_order,
                          cfg.series.quadrature_M);

  json certificates = json::array();
  bool all_pass = true;
  for (Complex z : certificate_grid(series.r_star)) {
    const FamilyEig eig = evaluate_A(model.snapped, z, /*with_vectors=*/false);
    const Complex mean = weighted_mean(eig, group, cfg.series.quadrature_M);
    for (int p = 0; p <= cfg.series.max_order; ++p) {
      Complex truncation = 0.0;
      for (int n = p; n >= 0; --n)
        truncation = truncation * z + series.coeffs[static_cast<size_t>(n)];
      const double observed = std::abs(mean - truncation);
      const double bound = error_bound(p, z, group.d, series.r_star);
      const bool pass = observed <= bound;
      all_pass = all_pass && pass;
      certificates.push_back(json{{"z", {z.real(), z.imag()}},
                                  {"p", p},
                                  {"bound", bound},
                                  {"observed", observed},
                                  {"pass", pass}});
    }
  }

  json doc;
  doc["meta"] = json_metadata(cfg);
  doc["meta"]["alpha"] = {alpha[0], alpha[1], alpha[2]};
  doc["meta"]["group_index"] = cfg.series.group_index;
  doc["meta"]["quadrature_M"] = cfg.series.quadrature_M;
  doc["beta0"] = group.beta0;
  doc["m"] = group.multiplicity;
  doc["d"] = group.d;
  doc["z_star"] = series.z_star;
  doc["r_star"] = series.r_star;
  doc["coeffs"] = series.coeffs;
  doc["cauchy_deviation"] = series.cauchy_deviation;
  doc["cauchy_bounds_ok"] = series.cauchy_bounds_ok;
  doc["imag_residue"] = series.imag_residue;
  doc["certificates"] = certificates;
  doc["certificates_pass"] = all_pass;
  return doc.dump(2) + "\n";
}

std::string effective_mu_json(const RunConfig& cfg) {
  const Vec3 alpha = single_alpha(cfg, "effective permeability");
  QuasiMomentum q;
  q.alpha = alpha;
  if (!q.is_zero())
    throw unsupported_error(
        "effective permeability is defined at alpha = 0 only");

  const SolvedModel model = solve_model(cfg, alpha);
  const ChiDivSpace space =
      build_chi_div(model.snapped, model.basis, cfg.shape);
  const ResonanceModes modes =
      solve_resonances(space, cfg.tol.eig_residual, cfg.tol.moment);
  const RootScan scan = find_roots(modes);
  bool interlacing = true;
  for (size_t i = 0; i + 1 < scan.poles.size(); ++i)
    interlacing = interlacing && scan.roots_per_interval[i] == 1;
  const UnionCheck check = spectrum_union_check(model.snapped, modes);

  json doc;
  doc["meta"] = json_metadata(cfg);
  doc["meta"]["alpha"] = {alpha[0], alpha[1], alpha[2]};
  doc["betas"] = std::vector<double>(modes.betas.data(),
                                     modes.betas.data() + modes.betas.size());
  doc["zero_mean_flags"] = modes.zero_mean;
  doc["poles"] = scan.poles;
  doc["roots"] = scan.roots;
  doc["interlacing_pass"] = interlacing;
  doc["union_check_distance"] = check.hausdorff;
  doc["union_clusters_a0"] = check.clusters_a0;
  doc["union_clusters_combined"] = check.clusters_union;
  return doc.dump(2) + "\n";
}

std::string radius_json(const RunConfig& cfg) {
  if (!cfg.buffer)
    throw config_error("radius output requires geometry.buffer with 0 < a < b < 1/2");
  const ThetaResult theta = theta_buffered_sphere(*cfg.buffer, 64);
  const double mu_minus = mu_minus_from_theta(theta.theta);
  json cl = json::array();
  for (int l = 1; l <= 16; ++l)
    cl.push_back(c_l_coefficient(cfg.buffer->a, cfg.buffer->b, l));

  json doc;
  doc["meta"] = json_metadata(cfg);
  doc["a"] = cfg.buffer->a;
  doc["b"] = cfg.buffer->b;
  doc["c_l"] = cl;
  doc["theta"] = theta.theta;
  doc["theta_inv"] = theta.theta_inv;
  doc["l_at_max"] = theta.l_at_max;
  doc["coarse_bound"] = theta.coarse_bound;
  doc["mu_minus"] = mu_minus;
  doc["z_star"] = z_star(mu_minus);
  return doc.dump(2) + "\n";
}

}  // namespace hcband
