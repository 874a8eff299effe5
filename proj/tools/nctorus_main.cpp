#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nctorus/experiment.hpp"

namespace {

int load_config(const std::string& path, nctorus::Json& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    return 2;
  }
  try {
    out = nctorus::Json::parse(in);
  } catch (const nctorus::Json::parse_error& e) {
    std::cerr << "error: invalid JSON in " << path << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}

void print_diagnostics(const std::vector<nctorus::Diagnostic>& diags) {
  for (const auto& d : diags) {
    const char* level =
        d.severity == nctorus::Diagnostic::Severity::error ? "error" : "warning";
    std::cerr << level << ": " << d.path << ": " << d.message << "\n";
  }
}

bool has_errors(const std::vector<nctorus::Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == nctorus::Diagnostic::Severity::error) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the magnetic noncommutative 2-torus"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("--config", config_path, "JSON experiment config")->required();
  run->add_option("--output-dir", output_dir, "override the config's output directory");

  CLI::App* validate = app.add_subcommand("validate", "check a config without executing");
  validate->add_option("--config", config_path, "JSON experiment config")->required();

  CLI11_PARSE(app, argc, argv);

  nctorus::Json config;
  if (int rc = load_config(config_path, config); rc != 0) return rc;

  const auto diags = nctorus::validate_config(config);
  print_diagnostics(diags);

  if (validate->parsed()) {
    if (has_errors(diags)) return 2;
    std::cout << "config ok" << (diags.empty() ? "" : " (with warnings)") << "\n";
    return 0;
  }

  if (has_errors(diags)) return 2;
  try {
    nctorus::ExperimentConfig cfg = nctorus::config_from_json(config);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    const nctorus::RunManifest manifest = nctorus::run_experiment(cfg, config);
    for (const auto& check : manifest.checks) {
      std::cout << (check.pass ? "[pass] " : "[FAIL] ") << check.name
                << "  value=" << nctorus::format_g17(check.value)
                << "  tolerance=" << nctorus::format_g17(check.tolerance) << "\n";
    }
    std::cout << "wall time: " << manifest.wall_time_seconds << " s\n";
    std::cout << "outputs in " << cfg.output_dir.string() << " (hash "
              << manifest.config_hash << ")\n";
    return manifest.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
