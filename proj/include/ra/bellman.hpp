#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ra/types.hpp"

// Reach-avoid Bellman machinery, cost convention throughout: the value is
// the best achievable outcome where negative means "reaches the target
// without ever entering the failure set" and lower is better.

namespace ra {

// Validated discount for solvers that need a contraction (gamma < 1).
// The one-step backups below additionally accept gamma = 1, where the
// discounted backup degenerates to the undiscounted one.
struct Discount {
  double gamma;
  explicit Discount(double g) : gamma(g) {
    if (!(g >= 0.0 && g < 1.0))
      throw std::invalid_argument("Discount: gamma must lie in [0, 1)");
  }
};

inline std::vector<double> default_gamma_ladder() {
  return {0.5, 0.9, 0.99, 0.999, 0.9999};
}

// Margins along a trajectory, index 0 = initial state.
struct MarginTrace {
  std::vector<double> l;
  std::vector<double> g;
};

// Trajectory outcome: the best over stopping times of the worse of the
// target margin then and the worst safety margin so far.  Non-positive iff
// some prefix reaches the target set without ever touching the failure set.
inline double payoff(const MarginTrace& trace) {
  if (trace.l.empty() || trace.l.size() != trace.g.size())
    throw std::invalid_argument("payoff: trace must be non-empty with matching lengths");
  double worst_g = -std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trace.l.size(); ++t) {
    if (std::isnan(trace.l[t]) || std::isnan(trace.g[t]))
      throw std::invalid_argument("payoff: NaN margin");
    worst_g = std::max(worst_g, trace.g[t]);
    best = std::min(best, std::max(trace.l[t], worst_g));
  }
  return best;
}

namespace detail {
inline void check_gamma_closed(double gamma, const char* where) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument(std::string(where) + ": gamma must lie in [0, 1]");
}
}  // namespace detail

// Undiscounted one-step backup.  min_successor_value is min over controls
// of the successor value.
inline double rabe_backup(double l, double g, double min_successor_value) {
  return std::max(g, std::min(l, min_successor_value));
}

// Discounted one-step backup; a sup-norm contraction with modulus gamma for
// gamma < 1, and exactly rabe_backup at gamma = 1.
inline double drabe_backup(double l, double g, double min_successor_value,
                           double gamma) {
  detail::check_gamma_closed(gamma, "drabe_backup");
  return gamma * std::max(std::min(min_successor_value, l), g) +
         (1.0 - gamma) * std::max(l, g);
}

// Safety-only variant (no target): keeps the worst constraint margin along
// the trajectory.
inline double safety_backup(double g, double min_successor_value, double gamma) {
  detail::check_gamma_closed(gamma, "safety_backup");
  return gamma * std::min(g, min_successor_value) + (1.0 - gamma) * g;
}

// Game backup: successor_values(i, j) is the successor value under attacker
// action i and defender action j; the attacker minimizes, the defender
// maximizes, defender informed of the attacker's choice.
inline double minimax_drabe_backup(double l, double g, const Mat& successor_values,
                                   double gamma) {
  detail::check_gamma_closed(gamma, "minimax_drabe_backup");
  if (successor_values.rows() == 0 || successor_values.cols() == 0)
    throw std::invalid_argument("minimax_drabe_backup: empty successor matrix");
  double inner = successor_values.rowwise().maxCoeff().minCoeff();
  return drabe_backup(l, g, inner, gamma);
}

// Regression target for the discounted backup from a stored transition.
// q_selected is the target network's value at the online network's greedy
// (argmin) successor action; at termination the successor value is frozen
// to max{l(s'), g(s')}.
inline double ddqn_target(const Margins& at_state, const Margins& at_next,
                          double q_selected, double gamma, bool terminal) {
  detail::check_gamma_closed(gamma, "ddqn_target");
  double boot = terminal ? terminal_value(at_next) : q_selected;
  return drabe_backup(at_state.l, at_state.g, boot, gamma);
}

// Per-step cost for the discounted sum-of-costs baseline: -1 on reaching
// the target, rho on failure (failure dominates), 0 otherwise.
inline double sum_step_cost(const Margins& at_next, double rho) {
  if (at_next.g > 0.0) return rho;
  if (at_next.l <= 0.0) return -1.0;
  return 0.0;
}

// Baseline regression target; at termination only the immediate cost counts.
inline double sum_cost_target(double cost, double q_selected, double gamma,
                              bool terminal) {
  detail::check_gamma_closed(gamma, "sum_cost_target");
  return terminal ? cost : cost + gamma * q_selected;
}

}  // namespace ra
