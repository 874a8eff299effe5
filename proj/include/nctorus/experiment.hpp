#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nctorus/flow.hpp"
#include "nctorus/json_io.hpp"

namespace nctorus {

enum class ExperimentKind {
  spectrum,
  heat_trace,
  volume_invariance,
  dixmier,
  flow,
  moments,
  euclidean,
  curvature_form,
  full_report,
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

struct McConfig {
  int n_paths = 10000;
  double dt = 1e-3;
  int steps = 1000;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::spectrum;
  GaugeConfig gauge;
  bool has_perturbation = false;
  TorusElement r1;
  TorusElement r2;
  int window_N = 8;
  std::vector<double> t_grid;
  McConfig mc;
  std::filesystem::path output_dir = ".";

  std::vector<Mode> flow_modes = {{1, 0}};
  PhaseConvention phase = PhaseConvention::natural;
  int moment_order = 2;
  double moment_lambda = -1.0;
  double moment_t_max = 1.0;
  int moment_steps = 100;  // uniform grid 0..t_max for the recursion quadrature
  std::vector<std::int64_t> dixmier_cutoffs;      // empty selects spectrum-based defaults
  std::vector<TorusElement> dixmier_elements;     // empty selects the identity
  double euclid_G1 = 0.0;
  double euclid_G2 = 0.0;
  std::vector<double> euclid_t = {0.25, 0.5, 1.0};
  std::string euclid_function = "gaussian";
  double euclid_extent = 28.0;
  double euclid_spacing = 0.25;
  std::string matrix_dump;  // "", "csv" or "binary"
};

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string path;     // JSON path of the offending field
  std::string message;
};

/// Full schema and invariant check without executing; every violation listed.
std::vector<Diagnostic> validate_config(const Json& j);

/// Parse after validation; throws std::invalid_argument on errors.
ExperimentConfig config_from_json(const Json& j);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::string kind;
  std::vector<CheckResult> checks;
  std::vector<std::string> outputs;
  double wall_time_seconds = 0.0;  // reported on stdout; not serialized, so
                                   // identical runs produce identical files

  bool all_pass() const;
  Json to_json() const;
};

inline constexpr const char* kToolVersion = "nctorus 0.1.0";

std::string config_hash_hex(const Json& config);

/// Executes the experiment, writes every CSV plus manifest.json under the
/// output directory, and returns the manifest.
RunManifest run_experiment(const ExperimentConfig& cfg, const Json& original);

}  // namespace nctorus
