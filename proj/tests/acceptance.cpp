// Acceptance gate: runs every criterion of the validation suite on the
// reference configuration and prints one PASS/FAIL line per criterion.
// Exits 0 only when all criteria hold.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "hcband/config.hpp"
#include "hcband/validate.hpp"

int main(int argc, char** argv) {
  using namespace hcband;

  // ctest hands in the built CLI; give it one end-to-end run up front so a
  // broken binary fails loudly here instead of obscurely inside the suite.
  if (argc > 1) {
    const std::string cmd = std::string(argv[1]) + " radius --out /dev/null";
    if (std::system(cmd.c_str()) != 0) {
      std::fprintf(stderr, "CLI smoke run failed: %s\n", cmd.c_str());
      return 1;
    }
  }

  const unsigned hw = std::thread::hardware_concurrency();
  const int threads = static_cast<int>(std::max(1u, std::min(hw, 8u)));

  const ValidationReport report =
      run_acceptance_suite(default_config(), threads);
  std::fputs(validation_table(report).c_str(), stdout);
  return report.all_pass ? 0 : 1;
}
