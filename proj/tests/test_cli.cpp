#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rb/cli/experiment.hpp"
#include "rb/cli/plotdata.hpp"
#include "rb/cli/verify.hpp"

using namespace rb;
using namespace rb::cli;

namespace {

std::string tiny_tiger_config(const std::string& name) {
  return R"({
    "name": ")" + name + R"(",
    "game": "tiger1",
    "agent": "b1",
    "k_values": [2],
    "seeds": [5],
    "total_steps": 400,
    "metrics_every": 100,
    "eval_episodes": 20,
    "mf_dim": 8, "code_dim": 8, "made_width": 8, "made_blocks": 1,
    "latent_dim": 2, "embed_dim": 4,
    "encoder_sizes": [4], "policy_sizes": [8],
    "embed_sizes": [4], "head_sizes": [4], "prior_sizes": [4]
  })";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing applies per-game defaults and validates") {
  ExperimentConfig cfg = config_from_json_text(tiny_tiger_config("t"));
  CHECK(cfg.lr == 2e-4);          // tiger default
  CHECK(cfg.geco_kappa == 0.25);  // tiger default
  CHECK(cfg.w_b0 == 100.0);
  CHECK(cfg.policy_input == "samples");
  CHECK(cfg.oracle_targets);

  ExperimentConfig rws = config_from_json_text(R"({
    "name": "r", "game": "rws", "agent": "b0",
    "total_steps": 10, "seeds": [1]})");
  CHECK(rws.lr == 3e-4);
  CHECK(rws.geco_kappa == 1.0);
  CHECK(rws.w_b0 == 10.0);
  CHECK(rws.latent_dim == 64);
  CHECK(rws.policy_input == "recurrent");

  SUBCASE("missing fields are named") {
    try {
      config_from_json_text(R"({"name": "x", "game": "tiger1", "agent": "b1",
                                "seeds": [1]})");
      FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("total_steps") != std::string::npos);
    }
  }
  SUBCASE("unknown fields are rejected") {
    CHECK_THROWS(config_from_json_text(R"({"name": "x", "game": "tiger1",
      "agent": "b1", "total_steps": 1, "seeds": [1], "typo_field": 3})"));
  }
  SUBCASE("bad values are rejected") {
    CHECK_THROWS(config_from_json_text(R"({"name": "x", "game": "nope",
      "agent": "b1", "total_steps": 1, "seeds": [1]})"));
    CHECK_THROWS(config_from_json_text(R"({"name": "x", "game": "tiger1",
      "agent": "b9", "total_steps": 1, "seeds": [1]})"));
    CHECK_THROWS(config_from_json_text(R"({"name": "x", "game": "tiger1",
      "agent": "b1", "total_steps": 1, "seeds": [1], "k_values": [0]})"));
  }
}

TEST_CASE("config hash is stable and sensitive") {
  ExperimentConfig a = config_from_json_text(tiny_tiger_config("t"));
  ExperimentConfig b = config_from_json_text(tiny_tiger_config("t"));
  CHECK(config_hash(a) == config_hash(b));
  b.lr = 1e-3;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("run_experiment is reproducible byte for byte") {
  namespace fs = std::filesystem;
  const std::string root = "cli_test_runs";
  fs::remove_all(root);
  ExperimentConfig cfg = config_from_json_text(tiny_tiger_config("repro"));
  run_experiment(cfg, root, /*quiet=*/true);
  const std::string metrics_path = root + "/repro/k2/seed5/metrics.csv";
  const std::string first = slurp(metrics_path);
  CHECK(!first.empty());

  fs::remove_all(root);
  run_experiment(cfg, root, /*quiet=*/true);
  CHECK(slurp(metrics_path) == first);

  SUBCASE("metrics csv round-trips through the parser") {
    ParsedMetrics parsed = read_metrics_csv(metrics_path);
    CHECK(parsed.config_hash == config_hash(cfg));
    CHECK(parsed.seed == 5);
    CHECK(!parsed.rows.empty());
    // re-serialize and compare
    std::ostringstream out;
    write_metrics_header(out, parsed.config_hash, parsed.seed);
    for (const auto& row : parsed.rows) write_metrics_row(out, row);
    CHECK(out.str() == first);
  }
  SUBCASE("eval and checkpoint artifacts exist and eval_run reloads them") {
    CHECK(fs::exists(root + "/repro/k2/seed5/eval.json"));
    CHECK(fs::exists(root + "/repro/k2/seed5/checkpoint_main.json"));
    train::EvalResult r = eval_run(root + "/repro/k2/seed5", 10, 3);
    CHECK(r.episodes == 10);
    CHECK(r.mean_per_round_return >= 0.0);
    CHECK(r.mean_per_round_return <= 1.0);
  }
  fs::remove_all(root);
}

TEST_CASE("plot data: curves with t-intervals and degenerate single-seed CI") {
  namespace fs = std::filesystem;
  const std::string root = "cli_plot_runs";
  fs::remove_all(root);
  ExperimentConfig cfg = config_from_json_text(tiny_tiger_config("plot"));
  cfg.seeds = {1, 2};
  run_experiment(cfg, root, /*quiet=*/true);
  const std::string run1 = root + "/plot/k2/seed1";
  const std::string run2 = root + "/plot/k2/seed2";

  SUBCASE("two seeds give symmetric non-degenerate intervals") {
    const std::string out =
        emit_plot_data({run1, run2}, "return-curve", "main", root + "/curve.csv");
    std::ifstream in(out);
    std::string header, cols, row;
    std::getline(in, header);
    std::getline(in, cols);
    CHECK(cols == "step,mean,ci_low,ci_high");
    bool any = false;
    while (std::getline(in, row)) {
      std::istringstream ss(row);
      std::string step, mean, lo, hi;
      std::getline(ss, step, ',');
      std::getline(ss, mean, ',');
      std::getline(ss, lo, ',');
      std::getline(ss, hi, ',');
      CHECK(std::stod(lo) <= std::stod(mean) + 1e-12);
      CHECK(std::stod(mean) <= std::stod(hi) + 1e-12);
      any = true;
    }
    CHECK(any);
  }
  SUBCASE("single seed degenerates to ci == mean") {
    const std::string out =
        emit_plot_data({run1}, "return-curve", "main", root + "/single.csv");
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string step, mean, lo, hi;
      std::getline(ss, step, ',');
      std::getline(ss, mean, ',');
      std::getline(ss, lo, ',');
      std::getline(ss, hi, ',');
      CHECK(mean == lo);
      CHECK(mean == hi);
    }
  }
  SUBCASE("scatter pairs mean l0 with mean return") {
    const std::string out = emit_plot_data({run1, run2}, "loss-return-scatter",
                                           "main", root + "/scatter.csv");
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "run,agent,mean_l0,mean_return");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);  // one agent in each of two runs
  }
  fs::remove_all(root);
}

TEST_CASE("verify_oracles reports all-pass on a fresh build") {
  VerifyReport report = verify_oracles();
  for (const auto& c : report.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(report.all_pass());
}

TEST_CASE("t quantiles match the reference table") {
  CHECK(t_quantile_975(2) == doctest::Approx(12.706));
  CHECK(t_quantile_975(6) == doctest::Approx(2.571));
  CHECK(t_quantile_975(3) == doctest::Approx(4.303));
}
