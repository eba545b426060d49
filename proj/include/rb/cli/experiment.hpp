#ifndef RB_CLI_EXPERIMENT_HPP_
#define RB_CLI_EXPERIMENT_HPP_

#include <string>
#include <vector>

#include "rb/cli/config.hpp"
#include "rb/train/trainer.hpp"

namespace rb::cli {

inline constexpr const char* kMetricsSchema = "rb-metrics v1";

// Runs every (K, seed) sub-run of the experiment under
// <out_root>/<name>/k<K>/seed<S>/ writing config.json, metrics.csv,
// checkpoints and eval.json. Returns the experiment directory.
std::string run_experiment(const ExperimentConfig& cfg,
                           const std::string& out_root, bool quiet = false);

// Re-instantiates a sub-run's learner from its config and checkpoint and
// evaluates it.
train::EvalResult eval_run(const std::string& subrun_dir, int episodes,
                           std::uint64_t seed);

// Parsed metrics row (schema-checked round-trip of metrics.csv).
struct ParsedMetrics {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<train::MetricsRow> rows;
};
ParsedMetrics read_metrics_csv(const std::string& path);

void write_metrics_header(std::ostream& out, const std::string& hash,
                          std::uint64_t seed);
void write_metrics_row(std::ostream& out, const train::MetricsRow& row);

std::string default_out_root();

}  // namespace rb::cli

#endif  // RB_CLI_EXPERIMENT_HPP_
