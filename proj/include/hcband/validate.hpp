#ifndef HCBAND_VALIDATE_HPP
#define HCBAND_VALIDATE_HPP

#include <string>
#include <vector>

#include "hcband/config.hpp"

namespace hcband {

// One acceptance criterion: a self-contained numerical check with an
// explicit tolerance, timed individually.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;  // worst observed metric vs its limit
};

struct ValidationReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  double total_seconds = 0.0;
};

// Runs the full acceptance suite on the given configuration: exact
// reconstruction identities, spectral bounds, dual-route agreement,
// series certificates, projection diagnostics, the periodic resonance
// limit, closed-form reference values and artifact determinism. Criteria
// keep going after a failure so the report is always complete.
ValidationReport run_acceptance_suite(const RunConfig& cfg, int threads = 1);

// One line per criterion plus a summary line, for terminal output.
std::string validation_table(const ValidationReport& report);

// The same report as a JSON document.
std::string validation_json(const ValidationReport& report);

}  // namespace hcband

#endif  // HCBAND_VALIDATE_HPP
