#pragma once

// Scenario runner: builds model-state sweeps or trajectories, evaluates the
// witness hierarchy at every point, and writes machine-readable curve data.
// Configuration arrives as JSON with a versioned schema; unknown keys are
// rejected so typos fail loudly instead of silently running defaults.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwit/models.hpp"
#include "spinwit/witnesses.hpp"

namespace spinwit {

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr int kConfigSchemaVersion = 1;

// Invalid configuration: the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integration or witness evaluation failure: the CLI maps this to exit 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepGrid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 keeps the runtime default
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json | both
  OptimizerConfig optimizer;   // rng_seed is overwritten with `seed`

  // Scenario-specific knobs; each scenario reads its own subset.
  int num_qubits = 0;
  int k = 0;
  SweepGrid p_grid;
  double alpha = 0.0;
  double field = 0.0;
  double gamma = 0.0;
  double coupling = 1.0;
  double t_stop = 0.0;
  double step = 1e-3;  // integrator step, units of 1/J0
  int stride = 10;     // witness evaluation every stride-th step
  std::optional<StateSpec> state;  // custom-state only
};

// Parses and validates a config document; throws ConfigError naming the
// offending field.  Scenario defaults reproduce the benchmark figures.
ScenarioConfig parse_config(const nlohmann::json& doc);

// Reads and parses a JSON file; throws ConfigError on IO or syntax errors.
nlohmann::json load_config_file(const std::string& path);

// The parsed config as a normalized JSON document (echoed into reports).
nlohmann::json config_to_json(const ScenarioConfig& config);

struct CurveRow {
  std::string scenario;
  int num_qubits = 0;
  std::string sweep_parameter;
  double sweep_value = 0.0;
  std::string coefficient;
  double value = 0.0;
  bool defined = false;
};

struct ScenarioResult {
  std::vector<CurveRow> rows;
  std::vector<double> sweep_values;
  std::vector<WitnessReport> reports;
  std::string csv_path;   // empty when the format excludes it
  std::string json_path;  // empty when the format excludes it
  double wall_seconds = 0.0;
};

// Runs the scenario and writes the requested artifacts into out_dir as
// <scenario>.csv / <scenario>.json.  Identical config and seed produce
// byte-identical CSV.  Throws ConfigError or NumericError.
ScenarioResult run_scenario(const ScenarioConfig& config);

// The states a sweep evaluates, exposed so tests can re-validate emitted
// values against direct library calls.
std::vector<DensityMatrix> scenario_states(const ScenarioConfig& config,
                                           std::vector<double>* sweep_values = nullptr);

}  // namespace spinwit
