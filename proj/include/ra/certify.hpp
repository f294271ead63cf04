#pragma once

#include <functional>
#include <vector>

#include "ra/bellman.hpp"
#include "ra/ddqn.hpp"
#include "ra/environment.hpp"
#include "ra/grid.hpp"

namespace ra {

using PolicyFn = std::function<int(const Vec&)>;
using PredictorFn = std::function<bool(const Vec&)>;  // true = predicted member

enum class Outcome { success, failure, unfinished };

const char* outcome_name(Outcome o);

struct RolloutRecord {
  std::vector<Vec> states;   // visited states, initial first
  std::vector<int> actions;  // one fewer than states
  MarginTrace trace;
  Outcome outcome = Outcome::unfinished;
  double payoff_value = 0.0;
  int steps = 0;
};

// Closed-loop simulation from s0; stops on entering the target or failure
// set, or after `horizon` steps.  payoff_value is the realized trajectory
// payoff; it is non-positive exactly when the outcome is success.
RolloutRecord rollout_value(const Environment& env, const PolicyFn& policy,
                            const Vec& s0, int horizon);

// ---------------------------------------------------------------------------
// Prediction quality against rollouts
// ---------------------------------------------------------------------------

struct ConfusionReport {
  long true_success = 0;
  long false_success = 0;  // predicted member, rollout did not succeed
  long true_failure = 0;
  long false_failure = 0;  // predicted non-member, rollout succeeded
  double fsr = 0.0;        // false_success / predicted-success
  double ffr = 0.0;        // false_failure / predicted-failure
  bool fsr_defined = false;
  bool ffr_defined = false;
};

ConfusionReport confusion_matrix(const Environment& env, const PredictorFn& predictor,
                                 const PolicyFn& policy, const std::vector<Vec>& probes,
                                 int horizon);

// ---------------------------------------------------------------------------
// Shielding
// ---------------------------------------------------------------------------

struct ShieldDecision {
  int action = 0;
  bool intervened = false;
  bool guarantee_lost = false;  // even the pure fallback rollout fails
};

// Executes the candidate only if simulating candidate-then-fallback for
// `horizon` steps succeeds; otherwise falls back.
ShieldDecision shield_action(const Environment& env, const Vec& s, int candidate,
                             const PolicyFn& fallback, int horizon);

// ---------------------------------------------------------------------------
// Exhaustive two-player validation
// ---------------------------------------------------------------------------

struct ExhaustiveConfig {
  int intervals = 10;
  int steps_per_interval = 5;
  int rounds = 2;
};

struct SequenceSummary {
  Outcome outcome = Outcome::unfinished;
  double payoff_value = 0.0;
};

struct ExhaustiveRound {
  // One entry per defender sequence, lexicographic (first interval slowest).
  std::vector<SequenceSummary> summaries;
  long worst_sequence = 0;  // index of the attacker-worst sequence
  RolloutRecord worst;
};

struct ExhaustiveReport {
  std::vector<ExhaustiveRound> rounds;
  Outcome final_outcome = Outcome::unfinished;
  long sequences_enumerated = 0;
};

// Enumerates every defender action sequence (constant action per interval)
// against the attacker policy (returns attacker action indices).  Outcomes
// rank failure < unfinished < success from the attacker's view, ties broken
// toward larger realized payoff; if the attacker-worst outcome is
// unfinished, recurses from its endpoint up to `rounds` rounds total.
ExhaustiveReport exhaustive_validate(const Environment& env,
                                     const PolicyFn& attacker_policy, const Vec& s0,
                                     const ExhaustiveConfig& config);

// ---------------------------------------------------------------------------
// Set distance
// ---------------------------------------------------------------------------

struct HausdorffResult {
  double directed_ab = 0.0;  // sup over cells of a of distance to b
  double directed_ba = 0.0;
  double symmetric = 0.0;
  bool empty = false;  // a or b empty: distances infinite
};

// Distances between cell-center point clouds of two masks on a shared grid
// (Euclidean, periodic dimensions wrap).
HausdorffResult hausdorff_distance(const MaskArray& a, const MaskArray& b,
                                   const Grid& grid);

// ---------------------------------------------------------------------------
// Policy / predictor adapters
// ---------------------------------------------------------------------------

// One-step lookahead on a value grid: pick the action whose successor has
// the smallest value (out-of-grid successors score max{l,g} there).
PolicyFn greedy_grid_policy(const Environment& env, const ValueGrid& vg,
                            bool interpolate = false);
PolicyFn qtable_policy(const QTable& qt);
PolicyFn net_policy(const NetworkParams& net);
// Attacker's component of the factored security pair.
PolicyFn net_attacker_policy(const NetworkParams& net, int attacker, int defender);

PredictorFn grid_membership(const ValueGrid& vg, bool interpolate = false);
PredictorFn net_membership(const NetworkParams& net);
PredictorFn net_minimax_membership(const NetworkParams& net, int attacker, int defender);
// Membership by running the fallback policy itself: zero false successes by
// construction.
PredictorFn rollout_membership(const Environment& env, const PolicyFn& policy,
                               int horizon);

}  // namespace ra
