#include "ra/commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ra/certify.hpp"
#include "ra/serialize.hpp"

namespace ra {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Loaded {
  ExperimentConfig config;
  fs::path out;
};

// Load + apply CLI overrides; the resolved snapshot reflects the overrides.
Loaded prepare(const CommandOptions& opt) {
  if (opt.config_path.empty())
    throw std::invalid_argument("config: --config is required");
  ExperimentConfig c = load_config(opt.config_path);
  if (opt.seed) {
    c.seed = *opt.seed;
    c.ql.seed = *opt.seed;
    c.train.seed = *opt.seed;
    c.raw["seed"] = *opt.seed;
  }
  if (!opt.artifact.empty()) {
    c.artifact = opt.artifact;
    c.raw["artifact"] = opt.artifact;
  }
  std::string out = c.out_dir;
  if (const char* env_out = std::getenv("RA_OUT_DIR"); env_out && *env_out)
    out = env_out;
  if (!opt.out_dir.empty()) out = opt.out_dir;
  c.out_dir = out;
  c.raw["out"] = out;
  return {std::move(c), fs::path(out)};
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + p.string() + ": " +
                             ec.message());
}

template <class Fn>
int guard(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  }
}

json jvec(const Vec& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

enum class ArtifactKind { value_grid, qtable, network };

ArtifactKind detect_artifact(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open artifact " + path);
  std::string head;
  std::getline(in, head);
  if (head.rfind("ra_valuegrid", 0) == 0) return ArtifactKind::value_grid;
  if (head.rfind("ra_qtable", 0) == 0) return ArtifactKind::qtable;
  for (char ch : head) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return ArtifactKind::network;
    break;
  }
  throw std::invalid_argument("unrecognized artifact format in " + path);
}

ValueGrid qtable_values(const QTable& qt) {
  Eigen::ArrayXd v(qt.grid.total_cells());
  for (long c = 0; c < qt.grid.total_cells(); ++c) v[c] = qt.greedy_value(c);
  return ValueGrid{qt.grid, std::move(v)};
}

// A loaded artifact turned into a rollout policy and a membership predictor.
struct PolicyBundle {
  ArtifactKind kind = ArtifactKind::value_grid;
  PolicyFn policy;
  PredictorFn predictor;
  std::shared_ptr<ValueGrid> vg;  // value grid (or greedy Q values)
  bool factored = false;
};

PolicyBundle load_policy(const ExperimentConfig& c, const std::string& path) {
  const Environment& env = *c.env;
  PolicyBundle b;
  b.kind = detect_artifact(path);
  if (b.kind == ArtifactKind::value_grid) {
    b.vg = std::make_shared<ValueGrid>(read_value_grid(path));
    if (b.vg->grid.dims() != env.state_dim())
      throw std::invalid_argument("artifact grid is " +
                                  std::to_string(b.vg->grid.dims()) + "-D but " +
                                  env.name() + " has " +
                                  std::to_string(env.state_dim()) + " state dimensions");
    b.policy = greedy_grid_policy(env, *b.vg, c.evaluate.interpolate);
    b.predictor = grid_membership(*b.vg, c.evaluate.interpolate);
  } else if (b.kind == ArtifactKind::qtable) {
    QTable qt = read_qtable(path);
    if (qt.grid.dims() != env.state_dim())
      throw std::invalid_argument("artifact grid dimension does not match " + env.name());
    if (qt.q.cols() != env.action_count())
      throw std::invalid_argument("artifact has " + std::to_string(qt.q.cols()) +
                                  " actions but " + env.name() + " has " +
                                  std::to_string(env.action_count()));
    b.policy = qtable_policy(qt);
    b.vg = std::make_shared<ValueGrid>(qtable_values(qt));
    b.predictor = grid_membership(*b.vg, false);
  } else {
    NetworkParams net = read_network(path);
    if (net.input_dim() != env.state_dim())
      throw std::invalid_argument("network input width " +
                                  std::to_string(net.input_dim()) +
                                  " does not match the " + env.name() + " state");
    if (net.output_dim() != env.action_count())
      throw std::invalid_argument("network output width " +
                                  std::to_string(net.output_dim()) +
                                  " does not match the " + env.name() + " control set");
    b.factored = c.solver == "minimax-ddqn";
    if (b.factored) {
      int na = env.attacker_actions(), nd = env.defender_actions();
      b.policy = net_attacker_policy(net, na, nd);
      b.predictor = net_minimax_membership(net, na, nd);
    } else {
      b.policy = net_policy(net);
      b.predictor = net_membership(net);
    }
  }
  return b;
}

std::string require_artifact(const ExperimentConfig& c) {
  if (c.artifact.empty())
    throw std::invalid_argument(
        "config: this command needs an artifact (--artifact or the 'artifact' key)");
  return c.artifact;
}

std::vector<std::pair<int, double>> parse_slice(const std::string& s) {
  std::vector<std::pair<int, double>> fixed;
  if (s.empty()) return fixed;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("slice: expected dim=coordinate, got '" + tok + "'");
    try {
      fixed.emplace_back(std::stoi(tok.substr(0, eq)), std::stod(tok.substr(eq + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("slice: cannot parse '" + tok + "'");
    }
  }
  return fixed;
}

}  // namespace

int cmd_train(const CommandOptions& opt) {
  return guard([&] {
    Loaded run = prepare(opt);
    ensure_dir(run.out);
    ExperimentConfig& c = run.config;
    const Environment& env = *c.env;
    write_json((run.out / "resolved_config.json").string(), c.raw);

    auto t0 = std::chrono::steady_clock::now();
    json summary{{"solver", c.solver}, {"environment", env.name()}, {"seed", c.seed}};
    int status = exit_ok;

    if (c.solver == "value-iteration") {
      Grid grid = build_grid(env, c.grid_counts);
      TransitionTable table = build_transition_table(env, grid);
      ValueIterationOptions vi = c.vi;
      vi.record_residuals = true;
      ValueIterationResult res = value_iteration(table, vi);
      write_value_grid((run.out / "value.csv").string(), res.values);
      MaskArray mask = extract_ra_mask(res.values);
      write_mask((run.out / "mask.csv").string(), mask, grid);
      {
        std::ofstream m(run.out / "metrics.jsonl");
        if (!m) throw std::runtime_error("cannot write metrics.jsonl");
        for (std::size_t i = 0; i < res.residuals.size(); ++i)
          m << json{{"sweep", i + 1}, {"residual", res.residuals[i]}}.dump() << "\n";
      }
      summary["gamma"] = vi.gamma;
      summary["cells"] = grid.total_cells();
      summary["sweeps"] = res.sweeps;
      summary["residual"] = res.residual;
      summary["converged"] = res.converged;
      summary["mask_cells"] = static_cast<long>(mask.count());
      if (!res.converged) {
        std::cerr << "value iteration stopped at residual " << res.residual
                  << " after " << res.sweeps << " sweeps (tol " << vi.tol << ")\n";
        status = exit_numeric;
      }
    } else if (c.solver == "tabular-q") {
      Grid grid = build_grid(env, c.grid_counts);
      TransitionTable table = build_transition_table(env, grid);
      QLearnResult res = tabular_q_learning(table, env.horizon(), c.ql);
      write_qtable((run.out / "qtable.csv").string(), res.q);
      write_value_grid((run.out / "value.csv").string(), qtable_values(res.q));
      MaskArray mask = extract_ra_mask(res.q);
      write_mask((run.out / "mask.csv").string(), mask, grid);
      write_qlearn_metrics((run.out / "metrics.jsonl").string(), res.metrics);
      long visited = std::count_if(res.cell_visits.begin(), res.cell_visits.end(),
                                   [](long n) { return n > 0; });
      summary["cells"] = grid.total_cells();
      summary["updates"] = res.updates;
      summary["episodes"] = res.episodes;
      summary["visited_cells"] = visited;
      summary["mask_cells"] = static_cast<long>(mask.count());
    } else {
      TrainConfig t = c.train;
      if (c.validation_counts.size() > 0) {
        ProbeSpec vs;
        vs.grid_counts = c.validation_counts;
        t.validation_states = probe_states(env, vs, c.seed);
      }
      TrainResult res = c.solver == "minimax-ddqn" ? minimax_ddqn_train(env, t)
                                                   : ddqn_train(env, t);
      write_network((run.out / "net.json").string(), res.online);
      write_network((run.out / "target_net.json").string(), res.target);
      write_train_metrics((run.out / "metrics.jsonl").string(), res.metrics);
      summary["updates"] = res.updates;
      summary["env_steps"] = res.env_steps;
      summary["episodes"] = res.episodes;
      summary["parameters"] = res.online.parameter_count();
      summary["diverged"] = res.diverged;
      for (auto it = res.metrics.rbegin(); it != res.metrics.rend(); ++it)
        if (it->has_eval) {
          summary["final_success_ratio"] = it->success_ratio;
          break;
        }
      if (res.diverged) {
        std::cerr << "training diverged after " << res.updates << " updates\n";
        status = exit_numeric;
      }
    }

    summary["runtime_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json((run.out / "summary.json").string(), summary);
    return status;
  });
}

int cmd_evaluate(const CommandOptions& opt) {
  return guard([&] {
    Loaded run = prepare(opt);
    ExperimentConfig& c = run.config;
    const Environment& env = *c.env;
    std::string artifact = require_artifact(c);
    PolicyBundle b = load_policy(c, artifact);
    ensure_dir(run.out);

    int horizon = c.evaluate.horizon > 0 ? c.evaluate.horizon : env.horizon();
    std::vector<Vec> probes = probe_states(env, c.evaluate.probes, c.seed);
    ConfusionReport rep = confusion_matrix(env, b.predictor, b.policy, probes, horizon);

    json out{{"artifact", artifact},
             {"environment", env.name()},
             {"probes", probes.size()},
             {"horizon", horizon},
             {"confusion", confusion_to_json(rep)}};

    if (c.evaluate.rollout_membership_check) {
      PredictorFn rm = rollout_membership(env, b.policy, horizon);
      ConfusionReport rrep = confusion_matrix(env, rm, b.policy, probes, horizon);
      out["rollout_membership"] = confusion_to_json(rrep);
    }

    if (b.vg) {
      MaskArray mask = extract_ra_mask(*b.vg);
      write_mask((run.out / "mask.csv").string(), mask, b.vg->grid);
      out["mask_cells"] = static_cast<long>(mask.count());
    } else if (c.evaluate.probes.grid_counts.size() > 0) {
      Grid pg = build_grid(env, c.evaluate.probes.grid_counts);
      MaskArray mask(pg.total_cells());
      for (long i = 0; i < pg.total_cells(); ++i) mask[i] = b.predictor(pg.center(i));
      write_mask((run.out / "mask.csv").string(), mask, pg);
      out["mask_cells"] = static_cast<long>(mask.count());
    }

    std::vector<double> ladder =
        opt.gamma_ladder.empty() ? c.evaluate.gamma_ladder : opt.gamma_ladder;
    if (!ladder.empty()) {
      if (b.kind != ArtifactKind::value_grid)
        throw std::invalid_argument("the discount ladder report needs a value-grid artifact");
      std::sort(ladder.begin(), ladder.end());
      TransitionTable table = build_transition_table(env, b.vg->grid);

      ValueIterationOptions vi = c.vi;
      vi.record_residuals = false;
      vi.gamma = c.evaluate.reference_gamma;
      ValueIterationResult ref = value_iteration(table, vi);
      MaskArray ref_mask = extract_ra_mask(ref.values);

      std::vector<MaskArray> masks;
      std::vector<Eigen::ArrayXd> values;
      json rungs = json::array();
      for (double gamma : ladder) {
        vi.gamma = gamma;
        ValueIterationResult res = value_iteration(table, vi);
        masks.push_back(extract_ra_mask(res.values));
        values.push_back(res.values.values);
        HausdorffResult h = hausdorff_distance(masks.back(), ref_mask, b.vg->grid);
        rungs.push_back(json{{"gamma", gamma},
                             {"sweeps", res.sweeps},
                             {"converged", res.converged},
                             {"mask_cells", static_cast<long>(masks.back().count())},
                             {"hausdorff_to_reference",
                              h.empty ? json() : json(h.symmetric)}});
      }
      bool nested = true;
      double max_violation = 0.0;
      for (std::size_t i = 0; i + 1 < masks.size(); ++i) {
        nested = nested && mask_subset(masks[i], masks[i + 1]);
        max_violation =
            std::max(max_violation, (values[i + 1] - values[i]).maxCoeff());
      }
      out["ladder"] = json{{"reference_gamma", c.evaluate.reference_gamma},
                           {"reference_mask_cells", static_cast<long>(ref_mask.count())},
                           {"gammas", rungs},
                           {"nested", nested},
                           {"max_value_violation", std::max(0.0, max_violation)}};
    }

    write_json((run.out / "evaluation.json").string(), out);
    return exit_ok;
  });
}

int cmd_export_grid(const CommandOptions& opt) {
  return guard([&] {
    Loaded run = prepare(opt);
    ExperimentConfig& c = run.config;
    std::string artifact = require_artifact(c);
    if (detect_artifact(artifact) != ArtifactKind::value_grid)
      throw std::invalid_argument("export-grid needs a value-grid artifact");
    ValueGrid vg = read_value_grid(artifact);
    std::vector<std::pair<int, double>> fixed = parse_slice(opt.slice);
    ensure_dir(run.out);
    write_grid_slice((run.out / "slice.csv").string(), vg, fixed);
    return exit_ok;
  });
}

int cmd_rollout(const CommandOptions& opt) {
  return guard([&] {
    Loaded run = prepare(opt);
    ExperimentConfig& c = run.config;
    const Environment& env = *c.env;
    std::string artifact = require_artifact(c);
    PolicyBundle b = load_policy(c, artifact);
    ensure_dir(run.out);

    int horizon = c.rollout.horizon > 0 ? c.rollout.horizon : env.horizon();
    std::vector<Vec> starts = c.rollout.starts;
    for (const Vec& s : starts)
      if (s.size() != env.state_dim())
        throw std::invalid_argument("rollout start has the wrong dimension");
    if (starts.empty()) {
      Rng rng = Rng::stream(c.seed, "rollout");
      for (int i = 0; i < c.rollout.samples; ++i) starts.push_back(env.sample_state(rng));
    }

    json records = json::array();
    long successes = 0, failures = 0, unfinished = 0;
    for (std::size_t k = 0; k < starts.size(); ++k) {
      RolloutRecord rec = rollout_value(env, b.policy, starts[k], horizon);
      write_rollout((run.out / ("rollout_" + std::to_string(k) + ".csv")).string(), rec);
      records.push_back(json{{"start", jvec(starts[k])},
                             {"outcome", outcome_name(rec.outcome)},
                             {"payoff", rec.payoff_value},
                             {"steps", rec.steps}});
      if (rec.outcome == Outcome::success) ++successes;
      else if (rec.outcome == Outcome::failure) ++failures;
      else ++unfinished;
    }
    write_json((run.out / "rollouts.json").string(),
               json{{"artifact", artifact},
                    {"horizon", horizon},
                    {"successes", successes},
                    {"failures", failures},
                    {"unfinished", unfinished},
                    {"records", records}});
    return exit_ok;
  });
}

int cmd_validate_exhaustive(const CommandOptions& opt) {
  return guard([&] {
    Loaded run = prepare(opt);
    ExperimentConfig& c = run.config;
    const Environment& env = *c.env;
    std::string artifact = require_artifact(c);
    if (c.solver != "minimax-ddqn")
      throw std::invalid_argument(
          "exhaustive validation needs a minimax-ddqn config and network artifact");
    PolicyBundle b = load_policy(c, artifact);
    ensure_dir(run.out);

    std::vector<Vec> starts = c.exhaustive.starts;
    for (const Vec& s : starts)
      if (s.size() != env.state_dim())
        throw std::invalid_argument("exhaustive start has the wrong dimension");
    if (starts.empty()) {
      Rng rng = Rng::stream(c.seed, "exhaustive");
      for (int i = 0; i < c.exhaustive.samples; ++i) {
        Vec s;
        int tries = 0;
        do {
          s = env.sample_state(rng);
          if (++tries > 10000)
            throw std::runtime_error("could not sample a non-terminal start state");
        } while (is_terminal(env.margins(s)));
        starts.push_back(s);
      }
    }

    json runs = json::array();
    long failures = 0;
    for (const Vec& s0 : starts) {
      ExhaustiveReport rep = exhaustive_validate(env, b.policy, s0, c.exhaustive.config);
      json entry = exhaustive_to_json(rep);
      entry["start"] = jvec(s0);
      runs.push_back(entry);
      if (rep.final_outcome == Outcome::failure) ++failures;
    }
    write_json((run.out / "exhaustive.json").string(),
               json{{"artifact", artifact},
                    {"intervals", c.exhaustive.config.intervals},
                    {"steps_per_interval", c.exhaustive.config.steps_per_interval},
                    {"rounds", c.exhaustive.config.rounds},
                    {"failures_found", failures},
                    {"runs", runs}});
    if (failures > 0) {
      std::cerr << "exhaustive validation found " << failures
                << " defender counterexample(s)\n";
      return exit_numeric;
    }
    return exit_ok;
  });
}

}  // namespace ra
