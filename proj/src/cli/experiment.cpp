#include "rb/cli/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "rb/diff/checkpoint.hpp"

namespace rb::cli {

namespace fs = std::filesystem;

std::string default_out_root() {
  const char* env = std::getenv("BELIEFS_OUT_ROOT");
  return env != nullptr ? env : "runs";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_metrics_header(std::ostream& out, const std::string& hash,
                          std::uint64_t seed) {
  out << "# " << kMetricsSchema << " config_hash=" << hash << " seed=" << seed
      << "\n";
  out << "step,agent,episodes,mean_return,mean_per_round,policy_loss,"
         "value_loss,entropy,l0,l1,l1_recon,l1_kl,lambda1,l2,l2_recon,l2_kl1,"
         "l2_kl2,lambda2_recon,lambda2_lo,lambda2_hi\n";
}

void write_metrics_row(std::ostream& out, const train::MetricsRow& r) {
  const train::UpdateMetrics& u = r.update;
  out << r.step << ',' << r.agent << ',' << r.episodes << ','
      << fmt(r.mean_return) << ',' << fmt(r.mean_per_round) << ','
      << fmt(u.policy_loss) << ',' << fmt(u.value_loss) << ',' << fmt(u.entropy)
      << ',' << fmt(u.l0) << ',' << fmt(u.l1) << ',' << fmt(u.l1_recon) << ','
      << fmt(u.l1_kl) << ',' << fmt(u.lambda1) << ',' << fmt(u.l2) << ','
      << fmt(u.l2_recon) << ',' << fmt(u.l2_kl1) << ',' << fmt(u.l2_kl2) << ','
      << fmt(u.lambda2_recon) << ',' << fmt(u.lambda2_lo) << ','
      << fmt(u.lambda2_hi) << '\n';
}

ParsedMetrics read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("metrics: cannot open " + path);
  ParsedMetrics out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# rb-metrics v1", 0) != 0)
    throw std::runtime_error("metrics: bad schema header in " + path);
  {
    const auto hpos = line.find("config_hash=");
    const auto spos = line.find(" seed=");
    if (hpos == std::string::npos || spos == std::string::npos)
      throw std::runtime_error("metrics: header missing hash/seed in " + path);
    out.config_hash = line.substr(hpos + 12, spos - (hpos + 12));
    out.seed = std::stoull(line.substr(spos + 6));
  }
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 20)
      throw std::runtime_error("metrics: bad row in " + path);
    train::MetricsRow r;
    r.step = std::stoll(cols[0]);
    r.agent = cols[1];
    r.episodes = std::stoi(cols[2]);
    r.mean_return = std::stod(cols[3]);
    r.mean_per_round = std::stod(cols[4]);
    r.update.policy_loss = std::stod(cols[5]);
    r.update.value_loss = std::stod(cols[6]);
    r.update.entropy = std::stod(cols[7]);
    r.update.l0 = std::stod(cols[8]);
    r.update.l1 = std::stod(cols[9]);
    r.update.l1_recon = std::stod(cols[10]);
    r.update.l1_kl = std::stod(cols[11]);
    r.update.lambda1 = std::stod(cols[12]);
    r.update.l2 = std::stod(cols[13]);
    r.update.l2_recon = std::stod(cols[14]);
    r.update.l2_kl1 = std::stod(cols[15]);
    r.update.l2_kl2 = std::stod(cols[16]);
    r.update.lambda2_recon = std::stod(cols[17]);
    r.update.lambda2_lo = std::stod(cols[18]);
    r.update.lambda2_hi = std::stod(cols[19]);
    out.rows.push_back(std::move(r));
  }
  return out;
}

namespace {

void run_tiger_subrun(const ExperimentConfig& cfg, int k, std::uint64_t seed,
                      const fs::path& dir, bool quiet) {
  train::AgentConfig acfg = build_agent_config(cfg, cfg.agent, k);
  train::Agent learner(acfg, seed, "main");
  train::TigerTrainOptions topt;
  topt.env_config = build_env_config(cfg);
  topt.total_steps = cfg.total_steps;
  topt.seed = seed;
  topt.metrics_every_steps = cfg.metrics_every;
  train::TigerTrainer trainer(learner, topt);

  std::ofstream csv(dir / "metrics.csv");
  write_metrics_header(csv, config_hash(cfg), seed);
  trainer.run([&](const train::MetricsRow& row) {
    write_metrics_row(csv, row);
    if (!quiet)
      std::cout << cfg.name << " k=" << k << " seed=" << seed << " step "
                << row.step << " per-round " << row.mean_per_round << "\n";
  });
  csv.close();

  train::EvalResult ev = trainer.evaluate(cfg.eval_episodes, seed ^ 0xe7a1ull);
  nlohmann::json j;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = seed;
  j["k"] = k;
  j["episodes"] = ev.episodes;
  j["mean_per_round_return"] = ev.mean_per_round_return;
  j["mean_episode_return"] = ev.mean_episode_return;
  std::ofstream(dir / "eval.json") << j.dump(2);

  Rng ckpt_rng(seed);
  diff::save_checkpoint(learner.params(), ckpt_rng,
                        (dir / "checkpoint_main.json").string());
}

void run_rws_subrun(const ExperimentConfig& cfg, int k, std::uint64_t seed,
                    const fs::path& dir, bool quiet) {
  train::Population pop;
  for (int i = 0; i < cfg.n_specialists; ++i) {
    train::AgentConfig acfg = build_agent_config(cfg, "model-free", k, i % 3);
    pop.specialists.push_back(std::make_unique<train::Agent>(
        acfg, seed * 1000 + 100 + static_cast<std::uint64_t>(i),
        "S" + std::to_string(i)));
  }
  for (int i = 0; i < cfg.n_non_specialists; ++i) {
    train::AgentConfig acfg = build_agent_config(cfg, "model-free", k);
    pop.non_specialists.push_back(std::make_unique<train::Agent>(
        acfg, seed * 1000 + 200 + static_cast<std::uint64_t>(i),
        "NS" + std::to_string(i)));
  }
  {
    train::AgentConfig acfg = build_agent_config(cfg, cfg.agent, k);
    pop.mains.push_back(
        std::make_unique<train::Agent>(acfg, seed * 1000 + 300, "main"));
  }

  train::RwsTrainOptions ropt;
  ropt.env_config = build_env_config(cfg);
  ropt.total_steps = cfg.total_steps;
  ropt.seed = seed;
  ropt.metrics_every_steps = cfg.metrics_every;
  ropt.freeze_specialists_at = cfg.freeze_specialists_at;
  train::RwsTrainer trainer(pop, ropt);

  std::ofstream csv(dir / "metrics.csv");
  write_metrics_header(csv, config_hash(cfg), seed);
  trainer.run([&](const train::MetricsRow& row) {
    write_metrics_row(csv, row);
    if (!quiet && row.agent == "main")
      std::cout << cfg.name << " k=" << k << " seed=" << seed << " step "
                << row.step << " main return " << row.mean_return << "\n";
  });
  csv.close();

  train::EvalResult ev =
      trainer.evaluate(*pop.mains[0], cfg.eval_episodes, seed ^ 0xe7a1ull);
  nlohmann::json j;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = seed;
  j["k"] = k;
  j["episodes"] = ev.episodes;
  j["mean_episode_return"] = ev.mean_episode_return;
  std::ofstream(dir / "eval.json") << j.dump(2);

  Rng ckpt_rng(seed);
  for (train::Agent* a : pop.pool())
    diff::save_checkpoint(a->params(), ckpt_rng,
                          (dir / ("checkpoint_" + a->name() + ".json")).string());
}

}  // namespace

std::string run_experiment(const ExperimentConfig& cfg,
                           const std::string& out_root, bool quiet) {
  const fs::path exp_dir = fs::path(out_root) / cfg.name;
  fs::create_directories(exp_dir);
  {
    std::ofstream out(exp_dir / "config.json");
    out << dump_config(cfg) << "\n";
    nlohmann::json manifest;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seeds"] = cfg.seeds;
    manifest["k_values"] = cfg.k_values;
    std::ofstream(exp_dir / "manifest.json") << manifest.dump(2);
  }
  for (int k : cfg.k_values) {
    for (std::uint64_t seed : cfg.seeds) {
      const fs::path dir =
          exp_dir / ("k" + std::to_string(k)) / ("seed" + std::to_string(seed));
      fs::create_directories(dir);
      std::ofstream(dir / "config.json") << dump_config(cfg) << "\n";
      if (cfg.game_id() == env::GameId::kRws)
        run_rws_subrun(cfg, k, seed, dir, quiet);
      else
        run_tiger_subrun(cfg, k, seed, dir, quiet);
    }
  }
  return exp_dir.string();
}

train::EvalResult eval_run(const std::string& subrun_dir, int episodes,
                           std::uint64_t seed) {
  const fs::path dir(subrun_dir);
  ExperimentConfig cfg = load_config((dir / "config.json").string());
  // K is recorded in the directory layout.
  int k = cfg.k_values.front();
  const std::string parent = dir.parent_path().filename().string();
  if (parent.rfind('k', 0) == 0) k = std::stoi(parent.substr(1));

  if (cfg.game_id() == env::GameId::kRws)
    throw std::runtime_error("eval_run: rws eval needs the full population; "
                             "use run_experiment");
  train::AgentConfig acfg = build_agent_config(cfg, cfg.agent, k);
  train::Agent learner(acfg, seed, "main");
  Rng unused;
  diff::load_checkpoint(learner.params(), unused,
                        (dir / "checkpoint_main.json").string());
  train::TigerTrainOptions topt;
  topt.env_config = build_env_config(cfg);
  topt.seed = seed;
  train::TigerTrainer trainer(learner, topt);
  return trainer.evaluate(episodes, seed);
}

}  // namespace rb::cli
