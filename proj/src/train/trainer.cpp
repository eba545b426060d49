#include "rb/train/trainer.hpp"

#include <map>
#include <stdexcept>

#include "rb/train/scripted.hpp"

namespace rb::train {

using model::BeliefCodeValue;

void ChunkAccumulator::push(ChunkStep step, const BeliefCodeValue& pre_code,
                            const BeliefCodeValue& cross_pre_code) {
  steps_.push_back({std::move(step), pre_code, cross_pre_code});
}

bool ChunkAccumulator::ready() const {
  if (static_cast<int>(steps_.size()) > chunk_length_) return true;
  return static_cast<int>(steps_.size()) == chunk_length_ &&
         steps_.back().step.done;
}

TrajectoryChunk ChunkAccumulator::take(Rng& rng) {
  if (!ready()) throw std::logic_error("ChunkAccumulator::take: not ready");
  TrajectoryChunk chunk;
  chunk.start_code = steps_.front().pre_code;
  chunk.cross_start_code = steps_.front().cross_pre_code;
  const int n = chunk_length_;
  for (int i = 0; i < n; ++i)
    chunk.steps.push_back(std::move(steps_[static_cast<std::size_t>(i)].step));
  chunk.bootstrap_value = 0.0;
  if (static_cast<int>(steps_.size()) > n && !chunk.steps.back().done) {
    // The successor step's pre-code is the post-chunk recurrent state.
    const Pending& next = steps_[static_cast<std::size_t>(n)];
    BeliefCodeValue code = agent_->net().encode_step_value(
        next.pre_code, next.step.obs_enc);
    diff::Tape t;
    std::optional<diff::Var> extra;
    if (agent_->config().policy_input == PolicyInput::kSamplesOnly)
      extra = t.input(agent_->sample_features(code, rng));
    diff::Var head = agent_->head_input(t, t.input(code.f_mf),
                                        t.input(code.b_hat), extra);
    chunk.bootstrap_value = agent_->value_estimate(t, head).scalar();
  }
  steps_.erase(steps_.begin(), steps_.begin() + n);
  return chunk;
}

// ---------------------------------------------------------------------------
// Tiger

TigerTrainer::TigerTrainer(Agent& learner, TigerTrainOptions options)
    : learner_(learner), opts_(std::move(options)) {
  if (opts_.env_config.game == env::GameId::kRws)
    throw std::invalid_argument("TigerTrainer: tiger games only");
  seat_ = opts_.env_config.game == env::GameId::kTiger1 ? 1 : 2;
}

void TigerTrainer::run(const MetricsSink& sink) {
  Rng rng(opts_.seed);
  ScriptedTigerP1 p1;
  ScriptedTigerP2V2 p2;
  ChunkAccumulator acc(&learner_, opts_.chunk_length);
  const int n_players = env::num_players(opts_.env_config.game);
  const BeliefCodeValue cross_zero =
      BeliefCodeValue::zeros(learner_.config().net.mf_dim,
                             learner_.config().net.code_dim);

  env::EnvState state;
  std::vector<env::Observation> obs;
  bool alive = false;
  BeliefCodeValue code;
  EpisodeHistory hist;
  std::vector<ChunkStep> ep_steps;
  std::vector<BeliefCodeValue> ep_codes;
  double ep_return = 0.0;
  // metrics window
  double window_return = 0.0, window_rounds = 0.0;
  int window_episodes = 0;
  long long last_row_step = 0;
  UpdateMetrics last_update;

  while (steps_done_ < opts_.total_steps) {
    if (!alive) {
      state = env::reset(opts_.env_config, rng.next_u64(), &obs);
      p1.reset();
      p2.reset();
      code = BeliefCodeValue::zeros(learner_.config().net.mf_dim,
                                    learner_.config().net.code_dim);
      hist = EpisodeHistory{};
      hist.game = opts_.env_config.game;
      ep_steps.clear();
      ep_codes.clear();
      ep_return = 0.0;
      alive = true;
    }
    hist.states.push_back(env::handcrafted_state(state));
    hist.observations.push_back(obs);
    const BeliefCodeValue pre = code;

    std::vector<int> actions(static_cast<std::size_t>(n_players), 0);
    actions[0] = p1.act(obs[0]);
    if (opts_.env_config.game == env::GameId::kTiger2) actions[1] = p2.act(obs[1]);
    ActResult ar = learner_.act(code, obs[static_cast<std::size_t>(seat_)], rng);
    actions[static_cast<std::size_t>(seat_)] = ar.action;
    hist.actions.push_back(actions);

    env::StepResult result = env::step(state, actions);
    ++steps_done_;

    ChunkStep cs;
    cs.obs_enc = model::encode_observation(obs[static_cast<std::size_t>(seat_)]);
    cs.action = ar.action;
    cs.reward = result.rewards[static_cast<std::size_t>(seat_)];
    cs.done = result.done;
    cs.policy_extra = ar.policy_extra;
    ep_steps.push_back(std::move(cs));
    ep_codes.push_back(pre);
    ep_return += result.rewards[static_cast<std::size_t>(seat_)];
    obs = result.observations;

    if (result.done) {
      alive = false;
      BeliefTargets targets = hindsight_targets(hist, learner_, seat_, rng);
      for (std::size_t i = 0; i < ep_steps.size(); ++i) {
        ep_steps[i].b0_target = targets.b0[i];
        ep_steps[i].bl_target = targets.bl[i];
        acc.push(std::move(ep_steps[i]), ep_codes[i], cross_zero);
      }
      while (acc.ready())
        last_update = a2c_update(learner_, acc.take(rng), rng);

      window_return += ep_return;
      // round 0 carries no prediction reward
      window_rounds += static_cast<double>(hist.states.size()) - 1.0;
      window_episodes += 1;
      if (sink != nullptr &&
          steps_done_ - last_row_step >= opts_.metrics_every_steps) {
        MetricsRow row;
        row.step = steps_done_;
        row.agent = learner_.name();
        row.episodes = window_episodes;
        row.mean_return = window_return / std::max(1, window_episodes);
        row.mean_per_round = window_rounds > 0 ? window_return / window_rounds : 0.0;
        row.update = last_update;
        sink(row);
        window_return = window_rounds = 0.0;
        window_episodes = 0;
        last_row_step = steps_done_;
      }
    }
  }
}

EvalResult TigerTrainer::evaluate(int episodes, std::uint64_t seed) {
  Rng rng(seed);
  ScriptedTigerP1 p1;
  ScriptedTigerP2V2 p2;
  const int n_players = env::num_players(opts_.env_config.game);
  EvalResult r;
  double total_return = 0.0, total_rounds = 0.0;
  for (int e = 0; e < episodes; ++e) {
    std::vector<env::Observation> obs;
    env::EnvState state = env::reset(opts_.env_config, rng.next_u64(), &obs);
    p1.reset();
    p2.reset();
    BeliefCodeValue code = BeliefCodeValue::zeros(
        learner_.config().net.mf_dim, learner_.config().net.code_dim);
    double ep_return = 0.0;
    bool first_round = true;
    while (!state.terminated) {
      std::vector<int> actions(static_cast<std::size_t>(n_players), 0);
      actions[0] = p1.act(obs[0]);
      if (opts_.env_config.game == env::GameId::kTiger2) actions[1] = p2.act(obs[1]);
      ActResult ar = learner_.act(code, obs[static_cast<std::size_t>(seat_)], rng,
                                  /*greedy=*/true);
      actions[static_cast<std::size_t>(seat_)] = ar.action;
      env::StepResult result = env::step(state, actions);
      ep_return += result.rewards[static_cast<std::size_t>(seat_)];
      if (!first_round) total_rounds += 1.0;  // round 0 is unscored
      first_round = false;
      obs = result.observations;
    }
    total_return += ep_return;
  }
  r.episodes = episodes;
  r.mean_episode_return = total_return / episodes;
  r.mean_per_round_return = total_rounds > 0 ? total_return / total_rounds : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Running with Scissors, multiple population play

RwsTrainer::RwsTrainer(Population& population, RwsTrainOptions options)
    : population_(population), opts_(std::move(options)) {
  if (opts_.env_config.game != env::GameId::kRws)
    throw std::invalid_argument("RwsTrainer: rws only");
}

void RwsTrainer::run(const MetricsSink& sink) {
  Rng rng(opts_.seed);
  std::vector<Agent*> pool = population_.pool();
  std::map<Agent*, ChunkAccumulator> accs;
  struct Window {
    double ret = 0.0;
    int episodes = 0;
    UpdateMetrics last_update;
  };
  std::map<Agent*, Window> windows;
  for (Agent* a : pool) {
    accs.emplace(a, ChunkAccumulator(a, opts_.chunk_length));
    windows.emplace(a, Window{});
  }
  const long long freeze_step = static_cast<long long>(
      opts_.freeze_specialists_at * static_cast<double>(opts_.total_steps));

  long long steps = 0;
  long long last_row_step = 0;
  while (steps < opts_.total_steps) {
    std::vector<Agent*> lineup = population_sample(pool, env::GameId::kRws, rng);
    std::vector<env::Observation> obs;
    env::EnvState state = env::reset(opts_.env_config, rng.next_u64(), &obs);
    EpisodeHistory hist;
    hist.game = env::GameId::kRws;
    std::array<BeliefCodeValue, 2> codes;
    std::array<std::vector<ChunkStep>, 2> ep_steps;
    std::array<std::vector<BeliefCodeValue>, 2> ep_codes;
    std::array<double, 2> ep_returns{0.0, 0.0};
    for (int s = 0; s < 2; ++s)
      codes[static_cast<std::size_t>(s)] = BeliefCodeValue::zeros(
          lineup[static_cast<std::size_t>(s)]->config().net.mf_dim,
          lineup[static_cast<std::size_t>(s)]->config().net.code_dim);

    while (!state.terminated && steps < opts_.total_steps) {
      hist.states.push_back(env::handcrafted_state(state));
      hist.observations.push_back(obs);
      std::vector<int> actions(2, 0);
      std::array<ActResult, 2> acts;
      std::array<BeliefCodeValue, 2> pre = codes;
      for (int s = 0; s < 2; ++s) {
        acts[static_cast<std::size_t>(s)] =
            lineup[static_cast<std::size_t>(s)]->act(
                codes[static_cast<std::size_t>(s)],
                obs[static_cast<std::size_t>(s)], rng);
        actions[static_cast<std::size_t>(s)] = acts[static_cast<std::size_t>(s)].action;
      }
      hist.actions.push_back(actions);
      env::StepResult result = env::step(state, actions);
      ++steps;
      for (int s = 0; s < 2; ++s) {
        Agent* agent = lineup[static_cast<std::size_t>(s)];
        ChunkStep cs;
        cs.obs_enc = model::encode_observation(obs[static_cast<std::size_t>(s)]);
        cs.action = actions[static_cast<std::size_t>(s)];
        cs.reward = specialist_reward(*agent,
                                      result.rewards[static_cast<std::size_t>(s)],
                                      result.pickups[static_cast<std::size_t>(s)]);
        cs.done = result.done;
        if (agent->config().type == AgentType::kTrajPred) {
          cs.opp_obs = obs[static_cast<std::size_t>(1 - s)];
          cs.opp_action = actions[static_cast<std::size_t>(1 - s)];
        }
        ep_steps[static_cast<std::size_t>(s)].push_back(std::move(cs));
        ep_codes[static_cast<std::size_t>(s)].push_back(pre[static_cast<std::size_t>(s)]);
        ep_returns[static_cast<std::size_t>(s)] +=
            result.rewards[static_cast<std::size_t>(s)];
      }
      obs = result.observations;
    }
    if (!state.terminated) break;  // training budget exhausted mid-episode

    for (int s = 0; s < 2; ++s) {
      Agent* agent = lineup[static_cast<std::size_t>(s)];
      BeliefTargets targets = hindsight_targets(hist, *agent, s, rng);
      const bool cross = !targets.b0_cross.empty();
      auto& steps_vec = ep_steps[static_cast<std::size_t>(s)];
      for (std::size_t i = 0; i < steps_vec.size(); ++i) {
        steps_vec[i].b0_target = targets.b0[i];
        steps_vec[i].bl_target = targets.bl[i];
        if (cross) {
          steps_vec[i].b0_cross_target = targets.b0_cross[i];
          steps_vec[i].cross_obs_enc = model::encode_observation(
              hist.observations[i][static_cast<std::size_t>(targets.co_player)]);
        }
        accs.at(agent).push(std::move(steps_vec[i]),
                            ep_codes[static_cast<std::size_t>(s)][i],
                            targets.cross_pre_codes.empty()
                                ? BeliefCodeValue::zeros(agent->config().net.mf_dim,
                                                         agent->config().net.code_dim)
                                : targets.cross_pre_codes[i]);
      }
      const bool frozen = agent->config().specialist >= 0 && steps >= freeze_step;
      while (accs.at(agent).ready()) {
        TrajectoryChunk chunk = accs.at(agent).take(rng);
        if (!frozen) windows.at(agent).last_update = a2c_update(*agent, chunk, rng);
      }
      windows.at(agent).ret += ep_returns[static_cast<std::size_t>(s)];
      windows.at(agent).episodes += 1;
    }

    if (sink != nullptr && steps - last_row_step >= opts_.metrics_every_steps) {
      for (Agent* a : pool) {
        Window& w = windows.at(a);
        if (w.episodes == 0) continue;
        MetricsRow row;
        row.step = steps;
        row.agent = a->name();
        row.episodes = w.episodes;
        row.mean_return = w.ret / w.episodes;
        row.update = w.last_update;
        sink(row);
        w.ret = 0.0;
        w.episodes = 0;
      }
      last_row_step = steps;
    }
  }
}

EvalResult RwsTrainer::evaluate(Agent& agent, int episodes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Agent*> opponents;
  for (const auto& a : population_.specialists) opponents.push_back(a.get());
  for (const auto& a : population_.non_specialists) opponents.push_back(a.get());
  if (opponents.empty())
    throw std::invalid_argument("RwsTrainer::evaluate: no opponents");
  EvalResult r;
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Agent* opp = opponents[rng.uniform_int(opponents.size())];
    std::vector<env::Observation> obs;
    env::EnvState state = env::reset(opts_.env_config, rng.next_u64(), &obs);
    BeliefCodeValue code_a = BeliefCodeValue::zeros(agent.config().net.mf_dim,
                                                    agent.config().net.code_dim);
    BeliefCodeValue code_o = BeliefCodeValue::zeros(opp->config().net.mf_dim,
                                                    opp->config().net.code_dim);
    while (!state.terminated) {
      std::vector<int> actions(2, 0);
      actions[0] = agent.act(code_a, obs[0], rng, /*greedy=*/true).action;
      actions[1] = opp->act(code_o, obs[1], rng).action;
      env::StepResult result = env::step(state, actions);
      total += result.rewards[0];
      obs = result.observations;
    }
  }
  r.episodes = episodes;
  r.mean_episode_return = total / episodes;
  return r;
}

}  // namespace rb::train
