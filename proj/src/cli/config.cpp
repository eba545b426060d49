#include "rb/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rb::cli {

using nlohmann::json;

env::GameId ExperimentConfig::game_id() const {
  if (game == "tiger1") return env::GameId::kTiger1;
  if (game == "tiger2") return env::GameId::kTiger2;
  if (game == "rws") return env::GameId::kRws;
  throw std::invalid_argument("config: unknown game '" + game + "'");
}

namespace {

void apply_game_defaults(ExperimentConfig& cfg) {
  if (cfg.game == "rws") {
    cfg.lr = 3e-4;
    cfg.w_b0 = 10.0;
    cfg.w_b1 = 1.0;
    cfg.w_b2 = 0.0;
    cfg.geco_kappa = 1.0;
    cfg.latent_dim = 64;
    cfg.policy_input = "recurrent";
    cfg.oracle_targets = false;
  } else {
    cfg.lr = 2e-4;
    cfg.w_b0 = 100.0;
    cfg.w_b1 = 10.0;
    cfg.w_b2 = 10.0;
    cfg.geco_kappa = 0.25;
    cfg.latent_dim = 8;
    cfg.policy_input = "samples";
    cfg.oracle_targets = true;
  }
}

const std::set<std::string> kKnownKeys = {
    "name", "game", "agent", "k_values", "seeds", "total_steps",
    "metrics_every", "eval_episodes", "lr", "entropy", "gamma", "value_coef",
    "w_b0", "w_b1", "w_b2", "use_geco", "normalize_elbo", "geco_kappa",
    "geco_eta", "geco_ma_decay", "kl_band_lo", "kl_band_hi", "latent_dim", "mf_dim", "code_dim",
    "made_width", "made_blocks", "embed_dim", "encoder_sizes", "policy_sizes",
    "embed_sizes", "head_sizes", "prior_sizes", "policy_input",
    "oracle_targets", "n_specialists", "n_non_specialists",
    "freeze_specialists_at", "rws_rows", "rws_cols", "rws_max_steps"};

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  for (const char* required : {"name", "game", "agent", "total_steps", "seeds"})
    if (!j.contains(required))
      throw std::invalid_argument(std::string("config: missing field '") +
                                  required + "'");
  for (auto& [key, value] : j.items())
    if (kKnownKeys.count(key) == 0)
      throw std::invalid_argument("config: unknown field '" + key + "'");

  ExperimentConfig cfg;
  cfg.name = j.at("name").get<std::string>();
  cfg.game = j.at("game").get<std::string>();
  (void)cfg.game_id();  // validate
  apply_game_defaults(cfg);
  cfg.agent = j.at("agent").get<std::string>();
  cfg.total_steps = j.at("total_steps").get<long long>();
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (cfg.seeds.empty()) throw std::invalid_argument("config: seeds is empty");

  get_if(j, "k_values", cfg.k_values);
  get_if(j, "metrics_every", cfg.metrics_every);
  get_if(j, "eval_episodes", cfg.eval_episodes);
  get_if(j, "lr", cfg.lr);
  get_if(j, "entropy", cfg.entropy);
  get_if(j, "gamma", cfg.gamma);
  get_if(j, "value_coef", cfg.value_coef);
  get_if(j, "w_b0", cfg.w_b0);
  get_if(j, "w_b1", cfg.w_b1);
  get_if(j, "w_b2", cfg.w_b2);
  get_if(j, "use_geco", cfg.use_geco);
  get_if(j, "normalize_elbo", cfg.normalize_elbo);
  get_if(j, "geco_kappa", cfg.geco_kappa);
  get_if(j, "geco_eta", cfg.geco_eta);
  get_if(j, "geco_ma_decay", cfg.geco_ma_decay);
  get_if(j, "kl_band_lo", cfg.kl_band_lo);
  get_if(j, "kl_band_hi", cfg.kl_band_hi);
  get_if(j, "latent_dim", cfg.latent_dim);
  get_if(j, "mf_dim", cfg.mf_dim);
  get_if(j, "code_dim", cfg.code_dim);
  get_if(j, "made_width", cfg.made_width);
  get_if(j, "made_blocks", cfg.made_blocks);
  get_if(j, "embed_dim", cfg.embed_dim);
  get_if(j, "encoder_sizes", cfg.encoder_sizes);
  get_if(j, "policy_sizes", cfg.policy_sizes);
  get_if(j, "embed_sizes", cfg.embed_sizes);
  get_if(j, "head_sizes", cfg.head_sizes);
  get_if(j, "prior_sizes", cfg.prior_sizes);
  get_if(j, "policy_input", cfg.policy_input);
  get_if(j, "oracle_targets", cfg.oracle_targets);
  get_if(j, "n_specialists", cfg.n_specialists);
  get_if(j, "n_non_specialists", cfg.n_non_specialists);
  get_if(j, "freeze_specialists_at", cfg.freeze_specialists_at);
  get_if(j, "rws_rows", cfg.rws_rows);
  get_if(j, "rws_cols", cfg.rws_cols);
  get_if(j, "rws_max_steps", cfg.rws_max_steps);

  const std::set<std::string> agents = {"model-free", "b0", "b1", "b2",
                                        "traj-pred"};
  if (agents.count(cfg.agent) == 0)
    throw std::invalid_argument("config: unknown agent '" + cfg.agent + "'");
  if (cfg.policy_input != "samples" && cfg.policy_input != "recurrent")
    throw std::invalid_argument("config: policy_input must be samples|recurrent");
  if (cfg.total_steps <= 0)
    throw std::invalid_argument("config: total_steps must be positive");
  for (int k : cfg.k_values)
    if (k < 1) throw std::invalid_argument("config: k_values must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["game"] = c.game;
  j["agent"] = c.agent;
  j["k_values"] = c.k_values;
  j["seeds"] = c.seeds;
  j["total_steps"] = c.total_steps;
  j["metrics_every"] = c.metrics_every;
  j["eval_episodes"] = c.eval_episodes;
  j["lr"] = c.lr;
  j["entropy"] = c.entropy;
  j["gamma"] = c.gamma;
  j["value_coef"] = c.value_coef;
  j["w_b0"] = c.w_b0;
  j["w_b1"] = c.w_b1;
  j["w_b2"] = c.w_b2;
  j["use_geco"] = c.use_geco;
  j["normalize_elbo"] = c.normalize_elbo;
  j["geco_kappa"] = c.geco_kappa;
  j["geco_eta"] = c.geco_eta;
  j["geco_ma_decay"] = c.geco_ma_decay;
  j["kl_band_lo"] = c.kl_band_lo;
  j["kl_band_hi"] = c.kl_band_hi;
  j["latent_dim"] = c.latent_dim;
  j["mf_dim"] = c.mf_dim;
  j["code_dim"] = c.code_dim;
  j["made_width"] = c.made_width;
  j["made_blocks"] = c.made_blocks;
  j["embed_dim"] = c.embed_dim;
  j["encoder_sizes"] = c.encoder_sizes;
  j["policy_sizes"] = c.policy_sizes;
  j["embed_sizes"] = c.embed_sizes;
  j["head_sizes"] = c.head_sizes;
  j["prior_sizes"] = c.prior_sizes;
  j["policy_input"] = c.policy_input;
  j["oracle_targets"] = c.oracle_targets;
  j["n_specialists"] = c.n_specialists;
  j["n_non_specialists"] = c.n_non_specialists;
  j["freeze_specialists_at"] = c.freeze_specialists_at;
  j["rws_rows"] = c.rws_rows;
  j["rws_cols"] = c.rws_cols;
  j["rws_max_steps"] = c.rws_max_steps;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string dump = dump_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

train::AgentConfig build_agent_config(const ExperimentConfig& cfg,
                                      const std::string& agent_type, int k,
                                      int specialist) {
  train::AgentConfig a;
  if (agent_type == "model-free")
    a.type = train::AgentType::kModelFree;
  else if (agent_type == "b0")
    a.type = train::AgentType::kB0;
  else if (agent_type == "b1")
    a.type = train::AgentType::kB1;
  else if (agent_type == "b2")
    a.type = train::AgentType::kB2;
  else if (agent_type == "traj-pred")
    a.type = train::AgentType::kTrajPred;
  else
    throw std::invalid_argument("unknown agent type " + agent_type);

  a.game = cfg.game_id();
  const int seat = a.game == env::GameId::kTiger1 ? 1
                   : a.game == env::GameId::kTiger2 ? 2
                                                    : 0;
  a.num_actions = env::num_actions(a.game, seat);
  a.k = k;
  a.net.obs_dim = model::observation_dim(a.game, seat);
  a.net.encoder_sizes = cfg.encoder_sizes;
  a.net.mf_dim = cfg.mf_dim;
  a.net.code_dim = cfg.code_dim;
  a.belief.latent_dim = cfg.latent_dim;
  a.belief.made_width = cfg.made_width;
  a.belief.made_blocks = cfg.made_blocks;
  a.belief.embed_dim = cfg.embed_dim;
  a.belief.embed_sizes = cfg.embed_sizes;
  a.belief.head_sizes = cfg.head_sizes;
  a.belief.prior_sizes = cfg.prior_sizes;
  a.policy_sizes = cfg.policy_sizes;
  a.policy_input = cfg.policy_input == "samples"
                       ? train::PolicyInput::kSamplesOnly
                       : train::PolicyInput::kRecurrent;
  a.specialist = specialist;
  a.weights.b0 = cfg.w_b0;
  a.weights.b1 = cfg.w_b1;
  a.weights.b2 = cfg.w_b2;
  a.weights.entropy = cfg.entropy;
  a.gamma = cfg.gamma;
  a.value_coef = cfg.value_coef;
  a.optimizer.lr = cfg.lr;
  a.use_geco = cfg.use_geco;
  a.geco_kappa = cfg.geco_kappa;
  a.geco_eta = cfg.geco_eta;
  a.geco_ma_decay = cfg.geco_ma_decay;
  a.geco_kl2_band = {cfg.kl_band_lo, cfg.kl_band_hi};
  a.normalize_elbo_by_k = cfg.normalize_elbo;
  a.oracle_targets = cfg.oracle_targets;
  return a;
}

env::GameConfig build_env_config(const ExperimentConfig& cfg) {
  env::GameConfig e;
  e.game = cfg.game_id();
  e.rws_rows = cfg.rws_rows;
  e.rws_cols = cfg.rws_cols;
  e.rws_max_steps = cfg.rws_max_steps;
  return e;
}

}  // namespace rb::cli
