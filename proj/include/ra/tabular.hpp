#pragma once

#include <cstdint>
#include <vector>

#include "ra/bellman.hpp"
#include "ra/grid.hpp"
#include "ra/rng.hpp"

namespace ra {

// ---------------------------------------------------------------------------
// Discrete model: snap dynamics and margins precomputed at cell centers.
// ---------------------------------------------------------------------------

struct SnapResult {
  long cell = -1;          // successor cell (clamped when out of domain)
  bool out_of_domain = false;
  Vec continuous;          // integrator successor before snapping
};

SnapResult snap_transition(const Environment& env, const Grid& grid, long cell,
                           int action);

// Successor/margin tables.  succ = -1 marks a successor outside the grid;
// its bootstrap value (max{l, g} at the continuous successor point) is kept
// in oob_value.  Cells in the target or failure set are terminal and carry
// the frozen value max{l, g}.
struct TransitionTable {
  Grid grid;
  int actions = 0;
  Eigen::ArrayXd l, g;                 // margins at cell centers
  std::vector<std::uint8_t> terminal;  // l <= 0 or g > 0
  std::vector<long> succ;              // cells x actions, cell-major
  Eigen::ArrayXd oob_value;            // cells x actions, cell-major

  long index(long cell, int action) const { return cell * actions + action; }
  Eigen::ArrayXd initial_values() const { return l.max(g); }
};

TransitionTable build_transition_table(const Environment& env, const Grid& grid);

// One Jacobi sweep of the discounted backup over all cells (terminal cells
// stay frozen).  Valid for gamma in [0, 1].
Eigen::ArrayXd backup_sweep(const TransitionTable& table, const Eigen::ArrayXd& v,
                            double gamma);

// ---------------------------------------------------------------------------
// Value iteration
// ---------------------------------------------------------------------------

struct ValueIterationOptions {
  double gamma = 0.9999;  // must be < 1
  double tol = 1e-6;      // sup-norm residual
  long max_sweeps = 300000;
  bool record_residuals = false;
};

struct ValueIterationResult {
  ValueGrid values;
  long sweeps = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residuals;  // when recorded
};

ValueIterationResult value_iteration(const TransitionTable& table,
                                     const ValueIterationOptions& options);
ValueIterationResult value_iteration(const Environment& env, const Grid& grid,
                                     const ValueIterationOptions& options);

// Exactly `sweeps` sweeps from the max{l, g} initialization; gamma = 1
// allowed.  The result equals the optimal `sweeps`-step finite-horizon value
// of the snapped dynamics.
ValueGrid finite_horizon_values(const TransitionTable& table, long sweeps,
                                double gamma);

// ---------------------------------------------------------------------------
// Hyperparameter schedules (staged exponential decay with a clamp)
// ---------------------------------------------------------------------------

struct Schedule {
  enum class Mode {
    constant,       // value = initial
    decay,          // max{initial * rate^stage, limit}
    anneal_to_one,  // min{1 - initial * rate^stage, limit}
  };
  Mode mode = Mode::constant;
  double initial = 0.0;
  double rate = 1.0;
  double limit = 0.0;
  int stages = 20;  // stage = floor(stages * step / total)
};

double evaluate_schedule(const Schedule& s, long step, long total);

Schedule constant_schedule(double value);
Schedule default_lr_schedule();       // max{0.001 * 0.8^stage, 0.0001}
Schedule default_epsilon_schedule();  // max{0.95 * 0.6^stage, 0.05}
Schedule default_gamma_schedule();    // min{1 - 0.2 * 0.5^stage, 0.999999}

// ---------------------------------------------------------------------------
// Tabular Q-learning on the snapped dynamics
// ---------------------------------------------------------------------------

struct QLearnConfig {
  long total_updates = 12000000;
  Schedule gamma = default_gamma_schedule();
  Schedule epsilon = default_epsilon_schedule();
  // Per-pair Robbins-Monro rate 1/(1+N)^exponent by default; the global
  // schedule below applies when use_global_rate is set.
  bool use_global_rate = false;
  double rm_exponent = 0.51;
  Schedule alpha = default_lr_schedule();
  int episode_cap = 0;  // 0: use the environment horizon
  std::uint64_t seed = 0;
  long metrics_every = 200000;
};

struct QLearnMetricsRow {
  long update = 0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double mean_abs_td = 0.0;  // since the previous row
};

struct QLearnResult {
  QTable q;
  std::vector<long> pair_visits;  // cells x actions, cell-major
  std::vector<long> cell_visits;
  long episodes = 0;
  long updates = 0;
  std::vector<QLearnMetricsRow> metrics;
};

QLearnResult tabular_q_learning(const TransitionTable& table, int env_horizon,
                                const QLearnConfig& config);

}  // namespace ra
