#ifndef HCBAND_CONFIG_HPP
#define HCBAND_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcband/geometry.hpp"
#include "hcband/types.hpp"

namespace hcband {

// Identifies the basis enumeration this build writes into every output;
// bump only when the ordering contract changes.
inline constexpr const char* basis_ordering_version = "lex-n-pol-v1";

enum class AlphaMode { point, list, path };

struct AlphaSpec {
  AlphaMode mode = AlphaMode::point;
  std::vector<Vec3> points;   // point: size 1; list: size >= 1
  int samples_per_leg = 32;   // path mode
};

struct SeriesOptions {
  int group_index = 1;
  int max_order = 4;
  int quadrature_M = 64;
};

struct BandOptions {
  int count = 10;
};

struct Tolerances {
  double eig_residual = 1e-10;
  double cluster = 1e-9;
  double moment = 1e-8;
};

struct RunConfig {
  InclusionShape shape;
  std::optional<BufferedGeometry> buffer;
  int cutoff_N = 2;
  double delta_snap = 0.2;
  std::vector<Complex> contrasts;
  AlphaSpec alpha;
  SeriesOptions series;
  BandOptions bands;
  Tolerances tol;
  std::string output_path;  // optional; the --out flag takes precedence

  // Canonical serialization (sorted keys, defaults filled in) and its hash;
  // both are embedded in every output for provenance.
  std::string canonical;
  std::uint64_t hash = 0;
  std::uint64_t geometry_hash = 0;
};

// 64-bit FNV-1a over a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

// Parses and validates a config document; fills defaults, computes the
// canonical form and hashes. Schema violations throw config_error.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// The desk-scale reference configuration: one sphere of radius 0.25
// centered in the cell, cutoff N = 2.
RunConfig default_config();

}  // namespace hcband

#endif  // HCBAND_CONFIG_HPP
