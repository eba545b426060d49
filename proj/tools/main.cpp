#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rb/cli/experiment.hpp"
#include "rb/cli/plotdata.hpp"
#include "rb/cli/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Recursive belief-state workbench"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  std::string out_root = rb::cli::default_out_root();
  bool quiet = false;
  run->add_option("--config", config_path, "Experiment config (json)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_root, "Output root (or $BELIEFS_OUT_ROOT)");
  run->add_flag("--quiet", quiet, "Suppress progress lines");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a trained sub-run");
  std::string subrun_dir;
  int eval_episodes = 1000;
  std::uint64_t eval_seed = 1;
  eval->add_option("--run-dir", subrun_dir, "Sub-run directory (k*/seed*)")
      ->required();
  eval->add_option("--episodes", eval_episodes, "Evaluation episodes");
  eval->add_option("--seed", eval_seed, "Evaluation seed");

  // verify-oracles
  auto* verify = app.add_subcommand("verify-oracles",
                                    "Check the analytic belief identities");
  std::string csv_dir;
  verify->add_option("--out", csv_dir, "Directory for the CSV tables");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Emit plot-ready CSV");
  std::vector<std::string> run_dirs;
  std::string figure = "return-curve";
  std::string agent = "main";
  std::string plot_out = "plot.csv";
  plot->add_option("--runs", run_dirs, "Sub-run directories")->required();
  plot->add_option("--figure", figure,
                   "return-curve | loss-return-scatter");
  plot->add_option("--agent", agent, "Agent name for curves");
  plot->add_option("--out", plot_out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rb::cli::ExperimentConfig cfg = rb::cli::load_config(config_path);
      const std::string dir = rb::cli::run_experiment(cfg, out_root, quiet);
      std::cout << "experiment written to " << dir << "\n";
    } else if (*eval) {
      rb::train::EvalResult r =
          rb::cli::eval_run(subrun_dir, eval_episodes, eval_seed);
      std::cout << "episodes " << r.episodes << " mean_per_round_return "
                << r.mean_per_round_return << " mean_episode_return "
                << r.mean_episode_return << "\n";
    } else if (*verify) {
      rb::cli::VerifyReport report = rb::cli::verify_oracles(csv_dir);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  ("
                  << c.detail << ")\n";
      if (!report.all_pass()) return 1;
    } else if (*plot) {
      const std::string path =
          rb::cli::emit_plot_data(run_dirs, figure, agent, plot_out);
      std::cout << "plot data written to " << path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
