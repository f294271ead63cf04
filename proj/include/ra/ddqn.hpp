#pragma once

#include <cstdint>
#include <vector>

#include "ra/environment.hpp"
#include "ra/mlp.hpp"
#include "ra/replay.hpp"
#include "ra/tabular.hpp"

namespace ra {

enum class Objective {
  reach_avoid,  // discounted reach-avoid backup targets
  // Discounted sum of sparse costs (baseline): -1 on entering the target,
  // +rho on entering the failure set, 0 elsewhere.  Validation still scores
  // the reach-avoid outcome of the greedy policy.
  sum_cost,
};

// Events that end a training episode (the horizon cap always applies).
// "boundary" keeps episodes alive through target and obstacle states until
// the state leaves the domain box, so a small rho makes unsafe crossings
// cheap for the sum baseline.  "failure_boundary" additionally cuts
// episodes on entering the failure set.
enum class Termination {
  target_failure,   // entering the target or the failure set
  failure_boundary, // entering the failure set or leaving the domain box
  boundary,         // leaving the domain box only
};

// Value-table initialization before training (Table-style "init" row):
// none, regression to max{l,g}, or regression to g alone.
enum class InitMode { none, max_lg, safety_margin };

struct TrainConfig {
  std::vector<int> hidden = {100, 20};
  long total_updates = 400000;
  int batch = 64;
  std::size_t buffer_capacity = 10000;
  std::size_t warmup = 1000;  // stored transitions before updates begin
  double tau = 0.01;
  Schedule lr = default_lr_schedule();
  Schedule epsilon = default_epsilon_schedule();
  Schedule gamma = constant_schedule(0.9999);
  bool adamw = false;
  double weight_decay = 0.01;
  Objective objective = Objective::reach_avoid;
  Termination termination = Termination::target_failure;
  double rho = 1.0;  // failure cost for the sum baseline
  InitMode init = InitMode::none;
  long pretrain_budget = 4000;
  double pretrain_tol = 1e-3;
  std::uint64_t seed = 0;
  long metrics_every = 2000;
  long eval_every = 50000;  // 0 disables validation rollouts
  int eval_horizon = 0;     // 0: environment horizon
  std::vector<Vec> validation_states;  // empty: 512 sampled once at start
  double divergence_loss = 1e6;
};

struct TrainMetricsRow {
  long update = 0;
  double loss = 0.0;
  double gamma = 0.0, epsilon = 0.0, lr = 0.0;
  bool has_eval = false;
  double success_ratio = 0.0;
};

struct TrainResult {
  NetworkParams online;
  NetworkParams target;
  std::vector<TrainMetricsRow> metrics;
  bool diverged = false;
  long updates = 0;
  long env_steps = 0;
  long episodes = 0;
};

// Double DQN with the reach-avoid (or sum-cost) targets; single action set.
TrainResult ddqn_train(const Environment& env, const TrainConfig& config);

// Game variant: the action set factors into attacker x defender
// (attacker-major); targets use min over attacker of max over defender with
// argmin/argmax indices from the online network and values from the target
// network.  With a 1-wide defender this is exactly ddqn_train.
TrainResult minimax_ddqn_train(const Environment& env, const TrainConfig& config);

struct PretrainResult {
  long updates = 0;
  double final_mse = 0.0;
  bool reached_tol = false;
};

// Regress every output toward the margin target (max{l,g} or g) on states
// sampled uniformly from the environment, until the batch MSE drops below
// tol or the budget is exhausted.
PretrainResult margin_pretrain(NetworkParams& net, const Environment& env,
                               InitMode mode, int batch, double tol, long budget,
                               double lr, Rng& rng);

// Policy helpers (min convention).
int greedy_action(const NetworkParams& net, const Vec& s);
double greedy_value(const NetworkParams& net, const Vec& s);
// Attacker-major factored outputs: security pair (attacker argmin of the
// column maxima is the outer choice; defender argmax within that row).
int minimax_joint_action(const NetworkParams& net, const Vec& s, int attacker,
                         int defender);
double minimax_value(const NetworkParams& net, const Vec& s, int attacker,
                     int defender);

// Fraction of validation states whose greedy rollout reaches the target set
// with no failure along the way.
double success_ratio(const Environment& env, const NetworkParams& net,
                     const std::vector<Vec>& states, int horizon, bool factored);

}  // namespace ra
