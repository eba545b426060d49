#ifndef RB_CLI_CONFIG_HPP_
#define RB_CLI_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rb/train/agent.hpp"

namespace rb::cli {

// Fully resolved experiment description. Serialized with every default made
// explicit so run records diff cleanly; the hash of that dump identifies the
// configuration in every output file.
struct ExperimentConfig {
  std::string name = "experiment";
  std::string game = "tiger1";  // tiger1 | tiger2 | rws
  std::string agent = "b1";     // model-free | b0 | b1 | b2 | traj-pred
  std::vector<int> k_values = {10};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  long long total_steps = 200000;
  long long metrics_every = 2000;
  int eval_episodes = 1000;

  // optimization
  double lr = 2e-4;  // 3e-4 rws, 2e-4 tiger
  double entropy = 0.015;
  double gamma = 0.99;
  double value_coef = 0.5;

  // belief losses
  double w_b0 = 100.0, w_b1 = 10.0, w_b2 = 10.0;
  bool use_geco = true;
  bool normalize_elbo = true;
  double geco_kappa = 0.25;
  double geco_eta = 0.01;
  double geco_ma_decay = 0.99;
  double kl_band_lo = 1.0, kl_band_hi = 5.0;

  // architecture
  int latent_dim = 8;
  int mf_dim = 128, code_dim = 128;
  int made_width = 128, made_blocks = 4;
  int embed_dim = 64;
  std::vector<int> encoder_sizes = {64};
  std::vector<int> policy_sizes = {64, 64};
  std::vector<int> embed_sizes = {64, 64};
  std::vector<int> head_sizes = {64, 64};
  std::vector<int> prior_sizes = {64, 64};

  std::string policy_input = "samples";  // samples | recurrent
  bool oracle_targets = true;

  // rws population
  int n_specialists = 3, n_non_specialists = 3;
  double freeze_specialists_at = 0.5;
  int rws_rows = 9, rws_cols = 13, rws_max_steps = 300;

  env::GameId game_id() const;
};

// Parses a config file. Unknown keys are rejected; missing required keys
// ("name", "game", "agent", "total_steps", "seeds") raise an error naming the
// field; optional keys resolve to per-game defaults.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

// Canonical dump with every field explicit.
std::string dump_config(const ExperimentConfig& cfg);

// FNV-1a 64 of the canonical dump, hex-encoded.
std::string config_hash(const ExperimentConfig& cfg);

// Agent assembly used by the runner and by eval.
train::AgentConfig build_agent_config(const ExperimentConfig& cfg,
                                      const std::string& agent_type, int k,
                                      int specialist = -1);
env::GameConfig build_env_config(const ExperimentConfig& cfg);

}  // namespace rb::cli

#endif  // RB_CLI_CONFIG_HPP_
