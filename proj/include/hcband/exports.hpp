#ifndef HCBAND_EXPORTS_HPP
#define HCBAND_EXPORTS_HPP

#include <string>
#include <vector>

#include "hcband/config.hpp"
#include "hcband/quasistatic.hpp"

namespace hcband {

// End-to-end solve of the configured geometry at one quasimomentum.
struct SolvedModel {
  PlaneWaveBasis basis;
  GramPair gram;
  StructuralSpectrum spectrum;  // as solved
  StructuralSpectrum snapped;   // end-snapped with the configured delta
};

SolvedModel solve_model(const RunConfig& cfg, const Vec3& alpha);

// Sampled Brillouin path Gamma -> X -> M -> R; Gamma is offset to
// (eps, eps, eps) with eps = 1e-6. Each leg carries samples_per_leg points
// at its left-closed end plus the final R corner, param in [0, 3].
struct PathPoint {
  double param = 0.0;
  Vec3 alpha;
};

std::vector<PathPoint> brillouin_path(int samples_per_leg);

// Deterministic text artifacts; the CLI writes them to --out (or stdout),
// the validation suite hashes them for the byte-identity check. Numbers in
// CSV use 17-significant-digit scientific notation.
std::string structural_csv(const RunConfig& cfg);
std::string bands_csv(const RunConfig& cfg, int threads = 1);
std::string series_json(const RunConfig& cfg);
std::string effective_mu_json(const RunConfig& cfg);
std::string radius_json(const RunConfig& cfg);

}  // namespace hcband

#endif  // HCBAND_EXPORTS_HPP
