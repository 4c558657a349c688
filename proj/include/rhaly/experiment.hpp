#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhaly/criteria.hpp"
#include "rhaly/etagen.hpp"

namespace rhaly::experiment {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Default number of stored eta entries beyond index 0.
inline constexpr std::size_t kDefaultMaxIndex = std::size_t{1} << 20;

enum class Task { criterion, partial_sum, shortcut, sections, residuals, lower_bounds, carleson };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

struct EtaSource {
  enum class Kind { classical, measure, power_log, explicit_values };
  Kind kind = Kind::classical;
  MeasureSpec measure;
  double s = 0.0;
  double r = 0.0;
  std::vector<Complex> values;

  /// Key used in sweep tables, e.g. "classical" or "power_log(s=1,r=0)".
  std::string label() const;
};

struct ExperimentConfig {
  EtaSource eta_source;
  double alpha = 0.0;
  double beta = 0.0;
  DyadicGrid n_grid;
  /// Largest stored eta index; defaults to max(2^20, 16 * 2^max_exp) for
  /// generated sources and to the explicit length otherwise.
  std::optional<std::size_t> n_max;
  std::vector<Task> tasks;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int max_iter = 100000;
  /// Output directory; empty means "compute only".
  std::filesystem::path output_dir;
  std::string output_format = "csv";

  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
  EtaSeq make_eta() const;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

/// Expands a sweep document: either an array of configs, or an object with
/// "base" plus optional "alpha" / "beta" lists (alpha-major product).
std::vector<ExperimentConfig> sweep_configs_from_json(const nlohmann::json& doc);

struct RunResult {
  int exit_code = kExitOk;
  std::string error;
  nlohmann::json summary;
  /// CSV text per task, keyed by file name ("criterion.csv", ...).
  std::vector<std::pair<std::string, std::string>> tables;
};

/*!
  Executes every task of `config`. Writes one CSV per task and summary.json
  to config.output_dir when it is set. Exit code 2 on validation failure, 3
  when a power iteration failed to converge.
*/
RunResult run(const ExperimentConfig& config);

struct SweepResult {
  int exit_code = kExitOk;
  std::string error;
  std::string table_csv;
  std::vector<RunResult> runs;
};

/// Runs the configs (up to `jobs` at once), config i writing into
/// out_dir/config_<i>. The merged table keeps config order; the exit code is
/// that of the first failing config.
SweepResult sweep(std::vector<ExperimentConfig> configs,
                  const std::filesystem::path& out_dir, int jobs = 1);

}  // namespace rhaly::experiment
