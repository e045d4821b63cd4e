// Command-line front end: loads a configuration, runs one of the solvers
// and writes the corresponding artifact to --out or stdout.
//
// Exit codes: 0 success, 1 validation criteria failed, 2 configuration or
// geometry rejected, 3 eigenvalue group selection failed, 4 request outside
// the supported regime, 5 numerical contract violated.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hcband/config.hpp"
#include "hcband/exports.hpp"
#include "hcband/types.hpp"
#include "hcband/validate.hpp"

namespace {

int write_artifact(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hcband;

  CLI::App app{"Bloch bands, structural spectra and eigenvalue series for "
               "two-phase periodic photonic crystals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string);

  std::string config_path;
  std::string out_path;
  int threads = 1;
  bool as_json = false;

  CLI::App* structural = app.add_subcommand(
      "structural", "contrast-independent spectrum of the geometry (CSV)");
  CLI::App* bands = app.add_subcommand(
      "bands", "Bloch band structure over the configured quasimomenta (CSV)");
  CLI::App* series = app.add_subcommand(
      "series", "eigenvalue power series with certified error bounds (JSON)");
  CLI::App* mu = app.add_subcommand(
      "effective-mu", "effective permeability spectrum at alpha = 0 (JSON)");
  CLI::App* radius = app.add_subcommand(
      "radius", "buffered-geometry convergence radius report (JSON)");
  CLI::App* validate = app.add_subcommand(
      "validate", "run the acceptance suite on the configuration");

  for (CLI::App* sub : {structural, bands, series, mu, radius, validate}) {
    sub->add_option("--config", config_path,
                    "JSON configuration file (built-in defaults when omitted)");
    sub->add_option("--out", out_path, "output file (stdout when omitted)");
    sub->add_option("--threads", threads, "worker threads")
        ->check(CLI::PositiveNumber);
  }
  validate->add_flag("--json", as_json, "report as JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg =
        config_path.empty() ? default_config() : load_config(config_path);
    const std::string dest = out_path.empty() ? cfg.output_path : out_path;

    if (validate->parsed()) {
      const ValidationReport report = run_acceptance_suite(cfg, threads);
      const std::string text =
          as_json ? validation_json(report) : validation_table(report);
      const int rc = write_artifact(text, dest);
      return rc != 0 ? rc : (report.all_pass ? 0 : 1);
    }

    std::string text;
    if (structural->parsed()) text = structural_csv(cfg);
    else if (bands->parsed()) text = bands_csv(cfg, threads);
    else if (series->parsed()) text = series_json(cfg);
    else if (mu->parsed()) text = effective_mu_json(cfg);
    else if (radius->parsed()) text = radius_json(cfg);
    return write_artifact(text, dest);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const geometry_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const selection_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const unsupported_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
}
