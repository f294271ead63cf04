#include "ra/tabular.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

SnapResult snap_transition(const Environment& env, const Grid& grid, long cell,
                           int action) {
  if (cell < 0 || cell >= grid.total_cells())
    throw std::invalid_argument("snap_transition: cell out of range");
  if (action < 0 || action >= env.action_count())
    throw std::invalid_argument("snap_transition: action out of range");
  SnapResult r;
  r.continuous = env.step(grid.center(cell), action);
  r.cell = grid.nearest_flat(r.continuous, &r.out_of_domain);
  return r;
}

TransitionTable build_transition_table(const Environment& env, const Grid& grid) {
  if (grid.dims() != env.state_dim())
    throw std::invalid_argument("build_transition_table: grid/environment dimension mismatch");
  TransitionTable t;
  t.grid = grid;
  t.actions = env.action_count();
  const long n = grid.total_cells();
  t.l.resize(n);
  t.g.resize(n);
  t.terminal.resize(n);
  t.succ.assign(n * t.actions, -1);
  t.oob_value = Eigen::ArrayXd::Zero(n * t.actions);
  for (long c = 0; c < n; ++c) {
    Margins m = env.margins(grid.center(c));
    t.l[c] = m.l;
    t.g[c] = m.g;
    t.terminal[c] = is_terminal(m) ? 1 : 0;
  }
  for (long c = 0; c < n; ++c) {
    if (t.terminal[c]) continue;  // successors of terminal cells never used
    for (int a = 0; a < t.actions; ++a) {
      SnapResult r = snap_transition(env, grid, c, a);
      long k = t.index(c, a);
      if (r.out_of_domain) {
        t.succ[k] = -1;
        t.oob_value[k] = terminal_value(env.margins(r.continuous));
      } else {
        t.succ[k] = r.cell;
      }
    }
  }
  return t;
}

Eigen::ArrayXd backup_sweep(const TransitionTable& table, const Eigen::ArrayXd& v,
                            double gamma) {
  detail::check_gamma_closed(gamma, "backup_sweep");
  if (v.size() != table.grid.total_cells())
    throw std::invalid_argument("backup_sweep: value table size mismatch");
  const long n = v.size();
  Eigen::ArrayXd out(n);
  for (long c = 0; c < n; ++c) {
    if (table.terminal[c]) {
      out[c] = std::max(table.l[c], table.g[c]);
      continue;
    }
    const long base = c * table.actions;
    double vmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < table.actions; ++a) {
      long s = table.succ[base + a];
      double sv = (s >= 0) ? v[s] : table.oob_value[base + a];
      vmin = std::min(vmin, sv);
    }
    out[c] = drabe_backup(table.l[c], table.g[c], vmin, gamma);
  }
  return out;
}

ValueIterationResult value_iteration(const TransitionTable& table,
                                     const ValueIterationOptions& options) {
  Discount check(options.gamma);  // rejects gamma outside [0, 1)
  (void)check;
  if (options.tol <= 0.0) throw std::invalid_argument("value_iteration: tol must be positive");
  ValueIterationResult r;
  Eigen::ArrayXd v = table.initial_values();
  for (long k = 0; k < options.max_sweeps; ++k) {
    Eigen::ArrayXd next = backup_sweep(table, v, options.gamma);
    double residual = (next - v).abs().maxCoeff();
    v.swap(next);
    ++r.sweeps;
    r.residual = residual;
    if (options.record_residuals) r.residuals.push_back(residual);
    if (residual <= options.tol) {
      r.converged = true;
      break;
    }
  }
  r.values = ValueGrid{table.grid, std::move(v)};
  return r;
}

ValueIterationResult value_iteration(const Environment& env, const Grid& grid,
                                     const ValueIterationOptions& options) {
  return value_iteration(build_transition_table(env, grid), options);
}

ValueGrid finite_horizon_values(const TransitionTable& table, long sweeps,
                                double gamma) {
  Eigen::ArrayXd v = table.initial_values();
  for (long k = 0; k < sweeps; ++k) v = backup_sweep(table, v, gamma);
  return ValueGrid{table.grid, std::move(v)};
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

double evaluate_schedule(const Schedule& s, long step, long total) {
  if (step < 0 || total <= 0 || step > total)
    throw std::invalid_argument("evaluate_schedule: need 0 <= step <= total");
  switch (s.mode) {
    case Schedule::Mode::constant:
      return s.initial;
    case Schedule::Mode::decay: {
      long stage = (s.stages * step) / total;
      return std::max(s.initial * std::pow(s.rate, static_cast<double>(stage)), s.limit);
    }
    case Schedule::Mode::anneal_to_one: {
      long stage = (s.stages * step) / total;
      return std::min(1.0 - s.initial * std::pow(s.rate, static_cast<double>(stage)),
                      s.limit);
    }
  }
  throw std::logic_error("evaluate_schedule: unknown mode");
}

Schedule constant_schedule(double value) {
  return Schedule{Schedule::Mode::constant, value, 1.0, value, 20};
}

Schedule default_lr_schedule() {
  return Schedule{Schedule::Mode::decay, 0.001, 0.8, 0.0001, 20};
}

Schedule default_epsilon_schedule() {
  return Schedule{Schedule::Mode::decay, 0.95, 0.6, 0.05, 20};
}

Schedule default_gamma_schedule() {
  return Schedule{Schedule::Mode::anneal_to_one, 0.2, 0.5, 0.999999, 20};
}

// ---------------------------------------------------------------------------
// Tabular Q-learning
// ---------------------------------------------------------------------------

QLearnResult tabular_q_learning(const TransitionTable& table, int env_horizon,
                                const QLearnConfig& config) {
  if (config.total_updates <= 0)
    throw std::invalid_argument("tabular_q_learning: total_updates must be positive");
  const long n = table.grid.total_cells();
  const int na = table.actions;
  const int cap = config.episode_cap > 0 ? config.episode_cap : env_horizon;

  QLearnResult r;
  r.q.grid = table.grid;
  r.q.q.resize(n, na);
  for (long c = 0; c < n; ++c)
    r.q.q.row(c).setConstant(std::max(table.l[c], table.g[c]));
  r.pair_visits.assign(n * na, 0);
  r.cell_visits.assign(n, 0);

  Rng reset = Rng::stream(config.seed, "reset");
  Rng explore = Rng::stream(config.seed, "exploration");

  long updates = 0;
  double td_acc = 0.0;
  long td_count = 0;
  while (updates < config.total_updates) {
    long cell = static_cast<long>(reset.below(static_cast<std::uint64_t>(n)));
    ++r.episodes;
    for (int t = 0; t < cap && updates < config.total_updates; ++t) {
      if (table.terminal[cell]) break;
      double eps = evaluate_schedule(config.epsilon, updates, config.total_updates);
      double gamma = evaluate_schedule(config.gamma, updates, config.total_updates);
      int a;
      if (explore.uniform() < eps) {
        a = static_cast<int>(explore.below(static_cast<std::uint64_t>(na)));
      } else {
        a = r.q.greedy_action(cell);
      }
      const long k = table.index(cell, a);
      const long s = table.succ[k];
      double boot;
      bool ends;
      if (s < 0) {
        boot = table.oob_value[k];
        ends = true;
      } else if (table.terminal[s]) {
        boot = std::max(table.l[s], table.g[s]);
        ends = true;
      } else {
        boot = r.q.q.row(s).minCoeff();
        ends = false;
      }
      double y = drabe_backup(table.l[cell], table.g[cell], boot, gamma);
      double alpha;
      if (config.use_global_rate) {
        alpha = evaluate_schedule(config.alpha, updates, config.total_updates);
      } else {
        alpha = 1.0 / std::pow(1.0 + static_cast<double>(r.pair_visits[k]),
                               config.rm_exponent);
      }
      double td = y - r.q.q(cell, a);
      r.q.q(cell, a) += alpha * td;
      ++r.pair_visits[k];
      ++r.cell_visits[cell];
      ++updates;
      td_acc += std::abs(td);
      ++td_count;
      if (config.metrics_every > 0 && updates % config.metrics_every == 0) {
        r.metrics.push_back({updates, gamma, eps,
                             td_count ? td_acc / td_count : 0.0});
        td_acc = 0.0;
        td_count = 0;
      }
      if (ends) break;
      cell = s;
    }
  }
  r.updates = updates;
  return r;
}

}  // namespace ra
