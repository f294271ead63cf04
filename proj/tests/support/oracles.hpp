#pragma once

// Independent reference implementations used only by the tests.  These
// deliberately avoid the library's solver code paths so that agreement is
// evidence, not tautology.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ra/environment.hpp"
#include "ra/mlp.hpp"
#include "ra/tabular.hpp"

namespace ra::test {

// ---------------------------------------------------------------------------
// Tiny particle variant whose snapped dynamics absorb every trajectory
// within 10 steps on a 10x20 grid: vy moves two rows per step, so the top
// edge (or a terminal box) is reached from any cell before the horizon.
// Small enough for exhaustive 3^10 action-sequence enumeration.
// ---------------------------------------------------------------------------

inline ParticleParams toy_particle_params() {
  ParticleParams p;
  p.vx = 4.0;  // one 0.2-pitch column per step
  p.vy = 2.0;  // two 0.05-pitch rows per step
  p.dt = 0.05;
  p.horizon = 40;
  p.layout.domain = BoxSpec{Vec{{0.0, 0.5}}, Vec{{2.0, 1.0}}};
  p.layout.target = BoxSpec{Vec{{0.3, 0.9}}, Vec{{0.6, 0.2}}};
  p.layout.obstacles = {BoxSpec{Vec{{-0.2, 0.45}}, Vec{{0.8, 0.1}}}};
  return p;
}

inline Grid toy_grid(const Environment& env) {
  return build_grid(env, VecI{{10, 20}});
}

// Trajectory payoff of one action sequence on the snapped dynamics, with
// the same absorbing conventions as the sweep model: terminal cells freeze
// at max{l, g}, out-of-grid successors contribute their precomputed
// boundary value as a final absorbing pseudo-state.
inline double sequence_payoff(const TransitionTable& table, long start,
                              const std::vector<int>& seq) {
  double worst_g = -std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  long c = start;
  for (std::size_t k = 0;; ++k) {
    worst_g = std::max(worst_g, table.g[c]);
    best = std::min(best, std::max(table.l[c], worst_g));
    if (table.terminal[c] || k == seq.size()) break;
    const long idx = table.index(c, seq[k]);
    const long nxt = table.succ[idx];
    if (nxt < 0) {
      best = std::min(best, std::max(table.oob_value[idx], worst_g));
      break;
    }
    c = nxt;
  }
  return best;
}

// Exact H-step value of a cell: minimum of sequence_payoff over all
// |actions|^H sequences.
inline double brute_force_value(const TransitionTable& table, long cell, int horizon) {
  const int na = table.actions;
  long total = 1;
  for (int k = 0; k < horizon; ++k) total *= na;
  std::vector<int> seq(horizon);
  double best = std::numeric_limits<double>::infinity();
  for (long code = 0; code < total; ++code) {
    long rem = code;
    for (int k = 0; k < horizon; ++k) {
      seq[k] = static_cast<int>(rem % na);
      rem /= na;
    }
    best = std::min(best, sequence_payoff(table, cell, seq));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Closed-form unicycle arc: exact solution of x' = v cos th, y' = v sin th,
// th' = u over time dt.
// ---------------------------------------------------------------------------

inline Vec dubins_arc(const Vec& s, double u, double v, double dt) {
  Vec out = s;
  const double th = s[2];
  if (u == 0.0) {
    out[0] += v * dt * std::cos(th);
    out[1] += v * dt * std::sin(th);
  } else {
    const double th2 = th + u * dt;
    out[0] += v / u * (std::sin(th2) - std::sin(th));
    out[1] -= v / u * (std::cos(th2) - std::cos(th));
    out[2] = th2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference gradient check.  The loss is the weighted output sum
// sum_ij C_ij * out_ij, so dLoss/dOutput = C exactly and the only error in
// the comparison is the O(h^2) central-difference truncation.
// ---------------------------------------------------------------------------

inline double weighted_output_loss(const NetworkParams& net, const Mat& X,
                                   const Mat& C) {
  return (forward(net, X).array() * C.array()).sum();
}

// Maximum relative disagreement between backpropagated and central
// finite-difference derivatives over every weight and bias.
inline double max_grad_rel_error(const NetworkParams& net, const Mat& X,
                                 const Mat& C, double h = 1e-4) {
  ForwardCache cache;
  forward_cached(net, X, cache);
  Gradients an = backward(net, cache, C);

  NetworkParams probe = net;
  double worst = 0.0;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = weighted_output_loss(probe, X, C);
    param = saved - h;
    const double dn = weighted_output_loss(probe, X, C);
    param = saved;
    const double fd = (up - dn) / (2.0 * h);
    const double scale = std::max({std::abs(analytic), std::abs(fd), 1.0});
    worst = std::max(worst, std::abs(analytic - fd) / scale);
  };
  for (std::size_t layer = 0; layer < probe.W.size(); ++layer) {
    for (long j = 0; j < probe.W[layer].size(); ++j)
      check(probe.W[layer].data()[j], an.dW[layer].data()[j]);
    for (long j = 0; j < probe.b[layer].size(); ++j)
      check(probe.b[layer].data()[j], an.db[layer].data()[j]);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Chi-square upper quantile via the Wilson-Hilferty cube approximation,
// accurate to ~0.1% for the dof used here.
// ---------------------------------------------------------------------------

inline double chi_square_quantile(double upper_tail_z, int dof) {
  const double k = static_cast<double>(dof);
  const double a = 2.0 / (9.0 * k);
  const double t = 1.0 - a + upper_tail_z * std::sqrt(a);
  return k * t * t * t;
}

// z-value for the 1e-3 upper tail of the standard normal.
inline constexpr double kZ999 = 3.090232306;

// ---------------------------------------------------------------------------
// One-dimensional drift environment for solver unit tests: x' = u with
// u in {-1, 0, +1}, dt = 1.  Target at x >= 3 (l = 3 - x), failure at
// x < -3 (g = -x - 3), domain [-5, 5].
// ---------------------------------------------------------------------------

class LineEnv : public Environment {
 public:
  LineEnv() {
    name_ = "line";
    actions_ = {Vec{{-1.0}}, Vec{{0.0}}, Vec{{1.0}}};
    dt_ = 1.0;
    horizon_ = 20;
    integrator_ = Integrator::euler;
    lower_ = Vec{{-5.0}};
    upper_ = Vec{{5.0}};
    periodic_ = {false};
  }
  Vec dynamics(const Vec&, const Vec& u) const override { return u; }
  Margins margins(const Vec& s) const override {
    return {3.0 - s[0], -s[0] - 3.0};
  }
};

// Single-action drift variant (x' = 1): the degenerate 1x1 "game" whose
// minimax training must collapse to the plain learner.
class DriftEnv : public Environment {
 public:
  DriftEnv() {
    name_ = "drift";
    actions_ = {Vec{{1.0}}};
    dt_ = 1.0;
    horizon_ = 20;
    integrator_ = Integrator::euler;
    lower_ = Vec{{-5.0}};
    upper_ = Vec{{5.0}};
    periodic_ = {false};
  }
  Vec dynamics(const Vec&, const Vec& u) const override { return u; }
  Margins margins(const Vec& s) const override {
    return {3.0 - s[0], -s[0] - 3.0};
  }
};

// Hand-built two-cell table: cell 0 is live with l = 0.5, g = -0.2 and
// every action leading to cell 1, which is terminal with max{l, g} = -0.3.
// The discounted fixed point at cell 0 has the closed form
//   gamma * max{min{-0.3, 0.5}, -0.2} + (1 - gamma) * max{0.5, -0.2}.
inline TransitionTable two_cell_table(int actions = 3) {
  TransitionTable t;
  t.grid = build_grid(Vec{{0.0}}, Vec{{2.0}}, VecI{{2}}, {false});
  t.actions = actions;
  t.l = Eigen::ArrayXd(2);
  t.g = Eigen::ArrayXd(2);
  t.l << 0.5, -0.3;
  t.g << -0.2, -0.6;
  t.terminal = {0, 1};
  t.succ.assign(2 * actions, 1);
  t.oob_value = Eigen::ArrayXd::Zero(2 * actions);
  return t;
}

}  // namespace ra::test
