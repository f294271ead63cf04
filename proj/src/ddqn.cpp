#include "ra/ddqn.hpp"

#include <cmath>
#include <stdexcept>

#include "ra/bellman.hpp"

namespace ra {

namespace {

// Greedy (row, col) pair of an attacker-major q matrix under the security
// ordering: attacker minimizes the per-row defender maximum; ties break to
// the lowest index.
struct PairChoice {
  int row = 0, col = 0;
};

PairChoice security_pair(const double* q, int rows, int cols) {
  PairChoice best;
  double best_rowmax = std::numeric_limits<double>::infinity();
  for (int r = 0; r < rows; ++r) {
    int arg_c = 0;
    double rowmax = q[r * cols];
    for (int c = 1; c < cols; ++c) {
      double v = q[r * cols + c];
      if (v > rowmax) {
        rowmax = v;
        arg_c = c;
      }
    }
    if (rowmax < best_rowmax) {
      best_rowmax = rowmax;
      best.row = r;
      best.col = arg_c;
    }
  }
  return best;
}

struct Engine {
  const Environment& env;
  const TrainConfig& config;
  int rows, cols;  // attacker x defender factorization (cols = 1: plain)

  bool out_of_domain(const Vec& s) const {
    for (int d = 0; d < env.state_dim(); ++d) {
      if (env.periodic()[d]) continue;
      if (s[d] < env.domain_lower()[d] || s[d] > env.domain_upper()[d]) return true;
    }
    return false;
  }

  bool episode_terminal(const Vec& s, const Margins& m) const {
    switch (config.termination) {
      case Termination::target_failure: return is_terminal(m);
      case Termination::failure_boundary: return m.g > 0.0 || out_of_domain(s);
      case Termination::boundary: return out_of_domain(s);
    }
    return is_terminal(m);
  }

  // Terminal states are frozen at max{l, g} in the tabular backup; give the
  // network the same supervision whenever one is encountered.  The stored
  // self-transition regresses Q(s, a) onto exactly that value (the backup of
  // a terminal bootstrap collapses to max{l, g}), cycling over actions so
  // every head gets anchored.  Sum-cost runs keep the standard rule where
  // terminal states only appear through truncated bootstraps.
  long anchors_pushed = 0;
  void push_terminal_anchor(ReplayBuffer& buffer, const Vec& s, const Margins& m) {
    if (config.objective != Objective::reach_avoid) return;
    int a = static_cast<int>(anchors_pushed++ % env.action_count());
    buffer.push(Transition{s, a, s, true, m, m});
  }

  TrainResult run() {
    if (config.batch <= 0 || config.total_updates <= 0)
      throw std::invalid_argument("ddqn_train: batch and total_updates must be positive");
    if (static_cast<long>(rows) * cols != env.action_count())
      throw std::invalid_argument("ddqn_train: action factorization does not match the environment");
    if (config.objective == Objective::sum_cost && cols != 1)
      throw std::invalid_argument("ddqn_train: sum-cost objective has no game variant");

    Rng init = Rng::stream(config.seed, "init");
    Rng reset = Rng::stream(config.seed, "reset");
    Rng explore = Rng::stream(config.seed, "exploration");
    Rng replay_rng = Rng::stream(config.seed, "replay");

    const int na = env.action_count();
    std::vector<int> sizes;
    sizes.push_back(env.state_dim());
    for (int h : config.hidden) sizes.push_back(h);
    sizes.push_back(na);

    TrainResult r;
    r.online = make_network(sizes, init);
    if (config.init != InitMode::none) {
      Rng pre = Rng::stream(config.seed, "pretrain");
      margin_pretrain(r.online, env, config.init, config.batch, config.pretrain_tol,
                      config.pretrain_budget, 0.001, pre);
    }
    r.target = r.online;

    std::vector<Vec> val_states = config.validation_states;
    if (val_states.empty() && config.eval_every > 0) {
      Rng vs = Rng::stream(config.seed, "validation");
      for (int i = 0; i < 512; ++i) val_states.push_back(env.sample_state(vs));
    }
    const int eval_h = config.eval_horizon > 0 ? config.eval_horizon : env.horizon();

    AdamState adam = make_adam_state(r.online);
    AdamConfig adam_cfg;
    adam_cfg.decoupled_weight_decay = config.adamw;
    adam_cfg.weight_decay = config.weight_decay;

    ReplayBuffer buffer(config.buffer_capacity);
    const std::size_t warmup = std::max<std::size_t>(
        {config.warmup, static_cast<std::size_t>(config.batch), 1});

    Vec s = env.sample_state(reset);
    Margins ms = env.margins(s);
    int ep_step = 0;
    ++r.episodes;

    double loss_acc = 0.0;
    long loss_count = 0;

    while (r.updates < config.total_updates) {
      // Skip straight to a fresh episode if the reset landed terminal.
      if (episode_terminal(s, ms) || ep_step >= env.horizon()) {
        if (is_terminal(ms)) push_terminal_anchor(buffer, s, ms);
        s = env.sample_state(reset);
        ms = env.margins(s);
        ep_step = 0;
        ++r.episodes;
        continue;
      }
      double eps = evaluate_schedule(config.epsilon, r.updates, config.total_updates);
      int a;
      if (explore.uniform() < eps) {
        a = static_cast<int>(explore.below(static_cast<std::uint64_t>(na)));
      } else if (cols == 1) {
        a = greedy_action(r.online, s);
      } else {
        a = minimax_joint_action(r.online, s, rows, cols);
      }
      Vec s2 = env.step(s, a);
      Margins ms2 = env.margins(s2);
      ++ep_step;
      bool ends = episode_terminal(s2, ms2) || ep_step >= env.horizon();
      buffer.push(Transition{s, a, s2, ends, ms, ms2});
      ++r.env_steps;
      if (ends) {
        if (is_terminal(ms2)) push_terminal_anchor(buffer, s2, ms2);
        s = env.sample_state(reset);
        ms = env.margins(s);
        ep_step = 0;
        ++r.episodes;
      } else {
        s = std::move(s2);
        ms = ms2;
      }

      if (buffer.size() < warmup) continue;

      // One gradient update per environment step.
      double gamma = evaluate_schedule(config.gamma, r.updates, config.total_updates);
      double lr = evaluate_schedule(config.lr, r.updates, config.total_updates);
      auto idx = buffer.sample_indices(config.batch, replay_rng);
      const int B = config.batch;
      Mat X(env.state_dim(), B), X2(env.state_dim(), B);
      for (int i = 0; i < B; ++i) {
        X.col(i) = buffer.at(idx[i]).s;
        X2.col(i) = buffer.at(idx[i]).s2;
      }
      ForwardCache cache;
      Mat q = forward_cached(r.online, X, cache);
      Mat q2_online = forward(r.online, X2);
      Mat q2_target = forward(r.target, X2);

      Mat grad = Mat::Zero(na, B);
      double loss = 0.0;
      for (int i = 0; i < B; ++i) {
        const Transition& tr = buffer.at(idx[i]);
        double boot;
        if (tr.terminal) {
          boot = terminal_value(tr.at_s2);
        } else {
          PairChoice pc = security_pair(q2_online.col(i).data(), rows, cols);
          boot = q2_target(pc.row * cols + pc.col, i);
        }
        double y;
        if (config.objective == Objective::reach_avoid) {
          y = drabe_backup(tr.at_s.l, tr.at_s.g, boot, gamma);
        } else {
          double c = sum_step_cost(tr.at_s2, config.rho);
          y = sum_cost_target(c, boot, gamma, tr.terminal);
        }
        double diff = q(tr.a, i) - y;
        loss += diff * diff;
        grad(tr.a, i) = 2.0 * diff / B;
      }
      loss /= B;

      Gradients grads = backward(r.online, cache, grad);
      optimizer_step(r.online, adam, grads, lr, adam_cfg);
      soft_update(r.target, r.online, config.tau);
      ++r.updates;
      loss_acc += loss;
      ++loss_count;

      bool at_metrics = config.metrics_every > 0 &&
                        (r.updates % config.metrics_every == 0 ||
                         r.updates == config.total_updates);
      bool at_eval = config.eval_every > 0 &&
                     (r.updates % config.eval_every == 0 ||
                      r.updates == config.total_updates);
      if (at_metrics || at_eval) {
        TrainMetricsRow row;
        row.update = r.updates;
        row.loss = loss_count ? loss_acc / loss_count : 0.0;
        row.gamma = gamma;
        row.epsilon = eps;
        row.lr = lr;
        if (at_eval) {
          row.has_eval = true;
          row.success_ratio =
              success_ratio(env, r.online, val_states, eval_h, cols > 1);
        }
        r.metrics.push_back(row);
        loss_acc = 0.0;
        loss_count = 0;
      }
      if (!std::isfinite(loss) || loss > config.divergence_loss) {
        r.diverged = true;
        break;
      }
    }
    return r;
  }
};

}  // namespace

TrainResult ddqn_train(const Environment& env, const TrainConfig& config) {
  Engine e{env, config, env.action_count(), 1};
  return e.run();
}

TrainResult minimax_ddqn_train(const Environment& env, const TrainConfig& config) {
  Engine e{env, config, env.attacker_actions(), env.defender_actions()};
  return e.run();
}

PretrainResult margin_pretrain(NetworkParams& net, const Environment& env,
                               InitMode mode, int batch, double tol, long budget,
                               double lr, Rng& rng) {
  if (mode == InitMode::none) return {0, 0.0, true};
  if (batch <= 0) throw std::invalid_argument("margin_pretrain: batch must be positive");
  AdamState adam = make_adam_state(net);
  PretrainResult r;
  const int na = net.output_dim();
  Mat X(env.state_dim(), batch);
  for (long k = 0; k < budget; ++k) {
    Eigen::RowVectorXd y(batch);
    for (int i = 0; i < batch; ++i) {
      Vec s = env.sample_state(rng);
      Margins m = env.margins(s);
      X.col(i) = s;
      y[i] = (mode == InitMode::max_lg) ? terminal_value(m) : m.g;
    }
    ForwardCache cache;
    Mat q = forward_cached(net, X, cache);
    Mat diff = q.rowwise() - y;
    double mse = diff.array().square().sum() / (batch * na);
    Gradients grads = backward(net, cache, 2.0 * diff / (batch * na));
    optimizer_step(net, adam, grads, lr);
    r.updates = k + 1;
    r.final_mse = mse;
    if (mse <= tol) {
      r.reached_tol = true;
      break;
    }
  }
  return r;
}

int greedy_action(const NetworkParams& net, const Vec& s) {
  Vec q = forward(net, s);
  int best = 0;
  for (int i = 1; i < q.size(); ++i)
    if (q[i] < q[best]) best = i;
  return best;
}

double greedy_value(const NetworkParams& net, const Vec& s) {
  return forward(net, s).minCoeff();
}

int minimax_joint_action(const NetworkParams& net, const Vec& s, int attacker,
                         int defender) {
  Vec q = forward(net, s);
  if (q.size() != static_cast<long>(attacker) * defender)
    throw std::invalid_argument("minimax_joint_action: output does not factor");
  PairChoice pc = security_pair(q.data(), attacker, defender);
  return pc.row * defender + pc.col;
}

double minimax_value(const NetworkParams& net, const Vec& s, int attacker,
                     int defender) {
  Vec q = forward(net, s);
  if (q.size() != static_cast<long>(attacker) * defender)
    throw std::invalid_argument("minimax_value: output does not factor");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      m(q.data(), attacker, defender);
  return m.rowwise().maxCoeff().minCoeff();
}

double success_ratio(const Environment& env, const NetworkParams& net,
                     const std::vector<Vec>& states, int horizon, bool factored) {
  if (states.empty()) return 0.0;
  int ok = 0;
  const int rows = factored ? env.attacker_actions() : env.action_count();
  const int cols = factored ? env.defender_actions() : 1;
  for (const Vec& s0 : states) {
    Vec s = s0;
    for (int t = 0; t <= horizon; ++t) {
      Margins m = env.margins(s);
      if (m.g > 0.0) break;
      if (m.l <= 0.0) {
        ++ok;
        break;
      }
      if (t == horizon) break;
      int a = (cols == 1) ? greedy_action(net, s)
                          : minimax_joint_action(net, s, rows, cols);
      s = env.step(s, a);
    }
  }
  return static_cast<double>(ok) / states.size();
}

}  // namespace ra
