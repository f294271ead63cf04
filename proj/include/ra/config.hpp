#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ra/certify.hpp"
#include "ra/ddqn.hpp"
#include "ra/environment.hpp"
#include "ra/tabular.hpp"

namespace ra {

// Probe/validation state sets: either cell centers of a coarse grid over
// the environment domain, or uniform samples.
struct ProbeSpec {
  VecI grid_counts;  // empty: sample instead
  int samples = 1000;
};

struct EvaluateSpec {
  ProbeSpec probes;
  int horizon = 0;  // 0: environment horizon
  bool interpolate = false;
  // Recompute fixed points along the ladder and report nesting + distance
  // to the reference-discount mask (value-grid artifacts only).
  std::vector<double> gamma_ladder;
  double reference_gamma = 0.999999;
  bool rollout_membership_check = false;
};

struct RolloutSpec {
  std::vector<Vec> starts;
  int samples = 10;  // used when starts is empty
  int horizon = 0;
};

struct ExhaustiveSpec {
  ExhaustiveConfig config;
  std::vector<Vec> starts;
  int samples = 1;
};

// Fully resolved experiment description.  `raw` is the resolved snapshot:
// re-loading it reproduces the run exactly.
struct ExperimentConfig {
  nlohmann::json raw;
  std::shared_ptr<Environment> env;
  std::string solver;  // value-iteration | tabular-q | ddqn | minimax-ddqn | sum-baseline
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string artifact;  // input artifact for evaluate/rollout/export

  VecI grid_counts;
  ValueIterationOptions vi;
  bool vi_interpolate = false;  // reserved for rollout policies on 3-D grids
  QLearnConfig ql;
  TrainConfig train;
  VecI validation_counts;  // coarse grid for the training validation set

  EvaluateSpec evaluate;
  RolloutSpec rollout;
  ExhaustiveSpec exhaustive;
};

// Build an environment from its JSON description ({"name": ..., overrides}).
std::shared_ptr<Environment> make_environment(const nlohmann::json& spec);

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// States for a ProbeSpec: grid centers or uniform samples (stream "probes").
std::vector<Vec> probe_states(const Environment& env, const ProbeSpec& spec,
                              std::uint64_t seed);

Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const Schedule& s);

}  // namespace ra
