#ifndef RB_TRAIN_TRAINER_HPP_
#define RB_TRAIN_TRAINER_HPP_

#include <functional>
#include <string>
#include <vector>

#include "rb/train/a2c.hpp"
#include "rb/train/hindsight.hpp"
#include "rb/train/population.hpp"

namespace rb::train {

struct MetricsRow {
  long long step = 0;
  std::string agent;
  int episodes = 0;
  double mean_return = 0.0;        // env reward per episode since the last row
  double mean_per_round = 0.0;     // prediction return per round (tiger)
  UpdateMetrics update;            // most recent update metrics
};

using MetricsSink = std::function<void(const MetricsRow&)>;

// Buffers played steps (with their pre-step recurrent states) and cuts exact
// fixed-length chunks whose bootstrap values come from the buffered successor
// step.
class ChunkAccumulator {
 public:
  ChunkAccumulator(Agent* agent, int chunk_length)
      : agent_(agent), chunk_length_(chunk_length) {}

  void push(ChunkStep step, const model::BeliefCodeValue& pre_code,
            const model::BeliefCodeValue& cross_pre_code);
  bool ready() const;
  TrajectoryChunk take(Rng& rng);
  std::size_t buffered() const { return steps_.size(); }

 private:
  struct Pending {
    ChunkStep step;
    model::BeliefCodeValue pre_code;
    model::BeliefCodeValue cross_pre_code;
  };
  Agent* agent_;
  int chunk_length_;
  std::vector<Pending> steps_;
};

struct TigerTrainOptions {
  env::GameConfig env_config;
  long long total_steps = 200000;
  int chunk_length = kChunkLength;
  std::uint64_t seed = 1;
  long long metrics_every_steps = 2000;
};

struct EvalResult {
  double mean_per_round_return = 0.0;
  double mean_episode_return = 0.0;
  int episodes = 0;
};

// Tiger harness: scripted optimal co-players, one learning predictor seat
// (P2 in the two-player game, P3 in the three-player game).
class TigerTrainer {
 public:
  TigerTrainer(Agent& learner, TigerTrainOptions options);

  void run(const MetricsSink& sink = nullptr);
  EvalResult evaluate(int episodes, std::uint64_t seed);
  long long steps_done() const { return steps_done_; }

 private:
  Agent& learner_;
  TigerTrainOptions opts_;
  int seat_;
  long long steps_done_ = 0;
};

struct RwsTrainOptions {
  env::GameConfig env_config;
  long long total_steps = 100000;
  int chunk_length = kChunkLength;
  std::uint64_t seed = 1;
  long long metrics_every_steps = 5000;
  double freeze_specialists_at = 0.5;  // fraction of total steps
};

// Multiple-population play on the reduced grid: uniform lineups from the
// pool, specialist pseudorewards, one update stream per agent.
class RwsTrainer {
 public:
  RwsTrainer(Population& population, RwsTrainOptions options);

  void run(const MetricsSink& sink = nullptr);

  // Mean env return of `agent` over `episodes` greedy evaluation episodes
  // against uniformly sampled opponents.
  EvalResult evaluate(Agent& agent, int episodes, std::uint64_t seed);

 private:
  Population& population_;
  RwsTrainOptions opts_;
};

}  // namespace rb::train

#endif  // RB_TRAIN_TRAINER_HPP_
