#include "ra/certify.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::failure: return "failure";
    case Outcome::unfinished: return "unfinished";
  }
  return "?";
}

RolloutRecord rollout_value(const Environment& env, const PolicyFn& policy,
                            const Vec& s0, int horizon) {
  if (horizon < 0) throw std::invalid_argument("rollout_value: horizon must be >= 0");
  RolloutRecord r;
  Vec s = s0;
  for (int t = 0;; ++t) {
    if (!s.allFinite())
      throw std::runtime_error("rollout_value: non-finite state at step " +
                               std::to_string(t));
    Margins m = env.margins(s);
    r.states.push_back(s);
    r.trace.l.push_back(m.l);
    r.trace.g.push_back(m.g);
    if (m.g > 0.0) {
      r.outcome = Outcome::failure;
      break;
    }
    if (m.l <= 0.0) {
      r.outcome = Outcome::success;
      break;
    }
    if (t == horizon) {
      r.outcome = Outcome::unfinished;
      break;
    }
    int a = policy(s);
    r.actions.push_back(a);
    s = env.step(s, a);
  }
  r.steps = static_cast<int>(r.actions.size());
  r.payoff_value = payoff(r.trace);
  return r;
}

ConfusionReport confusion_matrix(const Environment& env, const PredictorFn& predictor,
                                 const PolicyFn& policy, const std::vector<Vec>& probes,
                                 int horizon) {
  if (probes.empty()) throw std::invalid_argument("confusion_matrix: empty probe set");
  ConfusionReport rep;
  for (const Vec& s : probes) {
    bool predicted = predictor(s);
    bool succeeded = rollout_value(env, policy, s, horizon).outcome == Outcome::success;
    if (predicted && succeeded) ++rep.true_success;
    if (predicted && !succeeded) ++rep.false_success;
    if (!predicted && !succeeded) ++rep.true_failure;
    if (!predicted && succeeded) ++rep.false_failure;
  }
  long pred_s = rep.true_success + rep.false_success;
  long pred_f = rep.true_failure + rep.false_failure;
  rep.fsr_defined = pred_s > 0;
  rep.ffr_defined = pred_f > 0;
  rep.fsr = rep.fsr_defined ? static_cast<double>(rep.false_success) / pred_s : 0.0;
  rep.ffr = rep.ffr_defined ? static_cast<double>(rep.false_failure) / pred_f : 0.0;
  return rep;
}

ShieldDecision shield_action(const Environment& env, const Vec& s, int candidate,
                             const PolicyFn& fallback, int horizon) {
  if (horizon < 1) throw std::invalid_argument("shield_action: horizon must be >= 1");
  if (candidate < 0 || candidate >= env.action_count())
    throw std::invalid_argument("shield_action: candidate action out of range");
  Vec s1 = env.step(s, candidate);
  if (rollout_value(env, fallback, s1, horizon - 1).outcome == Outcome::success)
    return {candidate, false, false};
  ShieldDecision d;
  d.action = fallback(s);
  d.intervened = true;
  d.guarantee_lost =
      rollout_value(env, fallback, s, horizon).outcome != Outcome::success;
  return d;
}

namespace {

// Lower rank = worse for the attacker.
int outcome_rank(Outcome o) {
  switch (o) {
    case Outcome::failure: return 0;
    case Outcome::unfinished: return 1;
    case Outcome::success: return 2;
  }
  return 3;
}

bool worse_for_attacker(const SequenceSummary& a, const SequenceSummary& b) {
  int ra = outcome_rank(a.outcome), rb = outcome_rank(b.outcome);
  if (ra != rb) return ra < rb;
  return a.payoff_value > b.payoff_value;
}

}  // namespace

ExhaustiveReport exhaustive_validate(const Environment& env,
                                     const PolicyFn& attacker_policy, const Vec& s0,
                                     const ExhaustiveConfig& config) {
  if (config.intervals < 1 || config.steps_per_interval < 1 || config.rounds < 1)
    throw std::invalid_argument("exhaustive_validate: intervals, steps and rounds must be positive");
  const int nd = env.defender_actions();
  if (nd < 1 || env.attacker_actions() * nd != env.action_count())
    throw std::invalid_argument("exhaustive_validate: environment action set does not factor");

  long n_seq = 1;
  for (int i = 0; i < config.intervals; ++i) n_seq *= nd;

  ExhaustiveReport report;
  Vec start = s0;
  for (int round = 0; round < config.rounds; ++round) {
    ExhaustiveRound rr;
    rr.summaries.resize(n_seq);
    long worst = -1;
    RolloutRecord worst_record;
    for (long seq = 0; seq < n_seq; ++seq) {
      // Defender action per interval, lexicographic: first interval slowest.
      std::vector<int> defender(config.intervals);
      long rem = seq;
      for (int i = config.intervals - 1; i >= 0; --i) {
        defender[i] = static_cast<int>(rem % nd);
        rem /= nd;
      }
      RolloutRecord rec;
      Vec s = start;
      bool resolved = false;
      for (int t = 0; t < config.intervals * config.steps_per_interval && !resolved; ++t) {
        Margins m = env.margins(s);
        rec.states.push_back(s);
        rec.trace.l.push_back(m.l);
        rec.trace.g.push_back(m.g);
        if (m.g > 0.0) {
          rec.outcome = Outcome::failure;
          resolved = true;
          break;
        }
        if (m.l <= 0.0) {
          rec.outcome = Outcome::success;
          resolved = true;
          break;
        }
        int ua = attacker_policy(s);
        int ud = defender[t / config.steps_per_interval];
        rec.actions.push_back(ua * nd + ud);
        s = env.step(s, ua * nd + ud);
      }
      if (!resolved) {
        Margins m = env.margins(s);
        rec.states.push_back(s);
        rec.trace.l.push_back(m.l);
        rec.trace.g.push_back(m.g);
        if (m.g > 0.0) rec.outcome = Outcome::failure;
        else if (m.l <= 0.0) rec.outcome = Outcome::success;
        else rec.outcome = Outcome::unfinished;
      }
      rec.steps = static_cast<int>(rec.actions.size());
      rec.payoff_value = payoff(rec.trace);
      rr.summaries[seq] = {rec.outcome, rec.payoff_value};
      if (worst < 0 || worse_for_attacker(rr.summaries[seq], rr.summaries[worst])) {
        worst = seq;
        worst_record = std::move(rec);
      }
      ++report.sequences_enumerated;
    }
    rr.worst_sequence = worst;
    rr.worst = std::move(worst_record);
    Outcome o = rr.worst.outcome;
    Vec endpoint = rr.worst.states.back();
    report.rounds.push_back(std::move(rr));
    report.final_outcome = o;
    if (o != Outcome::unfinished) break;
    start = endpoint;  // continue the duel from where it stalled
  }
  return report;
}

HausdorffResult hausdorff_distance(const MaskArray& a, const MaskArray& b,
                                   const Grid& grid) {
  if (a.size() != grid.total_cells() || b.size() != grid.total_cells())
    throw std::invalid_argument("hausdorff_distance: mask size does not match grid");
  HausdorffResult res;
  if (!a.any() || !b.any()) {
    res.empty = true;
    res.directed_ab = res.directed_ba = res.symmetric =
        std::numeric_limits<double>::infinity();
    return res;
  }
  const int d = grid.dims();
  auto collect = [&](const MaskArray& m) {
    Mat pts(d, (m == true).count());
    long k = 0;
    for (long c = 0; c < m.size(); ++c)
      if (m[c]) pts.col(k++) = grid.center(c);
    return pts;
  };
  Mat pa = collect(a), pb = collect(b);
  Vec width = grid.upper - grid.lower;
  auto directed = [&](const Mat& from, const Mat& to) {
    double worst = 0.0;
    Eigen::ArrayXd dist2(to.cols());
    for (long i = 0; i < from.cols(); ++i) {
      dist2.setZero();
      for (int k = 0; k < d; ++k) {
        Eigen::ArrayXd delta = (to.row(k).array() - from(k, i)).abs();
        if (grid.periodic[k]) delta = delta.min(width[k] - delta);
        dist2 += delta.square();
      }
      worst = std::max(worst, dist2.minCoeff());
    }
    return std::sqrt(worst);
  };
  res.directed_ab = directed(pa, pb);
  res.directed_ba = directed(pb, pa);
  res.symmetric = std::max(res.directed_ab, res.directed_ba);
  return res;
}

// ---------------------------------------------------------------------------
// Adapters
// ---------------------------------------------------------------------------

PolicyFn greedy_grid_policy(const Environment& env, const ValueGrid& vg,
                            bool interpolate) {
  return [&env, vg, interpolate](const Vec& s) {
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int a = 0; a < env.action_count(); ++a) {
      Vec s2 = env.step(s, a);
      bool ood = false;
      long cell = vg.grid.nearest_flat(s2, &ood);
      double v;
      if (ood) v = terminal_value(env.margins(s2));
      else v = interpolate ? vg.interpolate(s2) : vg.values[cell];
      if (v < best_v) {
        best_v = v;
        best = a;
      }
    }
    return best;
  };
}

PolicyFn qtable_policy(const QTable& qt) {
  return [qt](const Vec& s) { return qt.greedy_action(qt.grid.nearest_flat(s)); };
}

PolicyFn net_policy(const NetworkParams& net) {
  return [net](const Vec& s) { return greedy_action(net, s); };
}

PolicyFn net_attacker_policy(const NetworkParams& net, int attacker, int defender) {
  return [net, attacker, defender](const Vec& s) {
    return minimax_joint_action(net, s, attacker, defender) / defender;
  };
}

PredictorFn grid_membership(const ValueGrid& vg, bool interpolate) {
  return [vg, interpolate](const Vec& s) {
    return (interpolate ? vg.interpolate(s) : vg.at(s)) <= 0.0;
  };
}

PredictorFn net_membership(const NetworkParams& net) {
  return [net](const Vec& s) { return greedy_value(net, s) <= 0.0; };
}

PredictorFn net_minimax_membership(const NetworkParams& net, int attacker,
                                   int defender) {
  return [net, attacker, defender](const Vec& s) {
    return minimax_value(net, s, attacker, defender) <= 0.0;
  };
}

PredictorFn rollout_membership(const Environment& env, const PolicyFn& policy,
                               int horizon) {
  return [&env, policy, horizon](const Vec& s) {
    return rollout_value(env, policy, s, horizon).outcome == Outcome::success;
  };
}

}  // namespace ra
