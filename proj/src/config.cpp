#include "ra/config.hpp"

#include <fstream>
#include <set>

namespace ra {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  if (!obj.is_object())
    throw std::invalid_argument("config: " + context + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw std::invalid_argument("config: unknown key '" + key + "' in " + context);
  }
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("config: expected an array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

VecI veci_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("config: expected an array of integers");
  VecI v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<int>();
  return v;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json veci_to_json(const VecI& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

BoxSpec box_from_json(const json& j) {
  check_keys(j, {"center", "lengths"}, "box");
  return BoxSpec{vec_from_json(j.at("center")), vec_from_json(j.at("lengths"))};
}

json box_to_json(const BoxSpec& b) {
  return json{{"center", vec_to_json(b.center)}, {"lengths", vec_to_json(b.lengths)}};
}

}  // namespace

Schedule schedule_from_json(const json& j) {
  if (j.is_number()) return constant_schedule(j.get<double>());
  check_keys(j, {"type", "value", "initial", "rate", "floor", "ceiling", "stages"},
             "schedule");
  std::string type = j.at("type").get<std::string>();
  Schedule s;
  s.stages = j.value("stages", 20);
  if (type == "constant") {
    s = constant_schedule(j.at("value").get<double>());
  } else if (type == "decay") {
    s.mode = Schedule::Mode::decay;
    s.initial = j.at("initial").get<double>();
    s.rate = j.at("rate").get<double>();
    s.limit = j.at("floor").get<double>();
  } else if (type == "anneal") {
    s.mode = Schedule::Mode::anneal_to_one;
    s.initial = j.at("initial").get<double>();
    s.rate = j.at("rate").get<double>();
    s.limit = j.at("ceiling").get<double>();
  } else {
    throw std::invalid_argument("config: unknown schedule type '" + type + "'");
  }
  return s;
}

json schedule_to_json(const Schedule& s) {
  switch (s.mode) {
    case Schedule::Mode::constant:
      return json{{"type", "constant"}, {"value", s.initial}};
    case Schedule::Mode::decay:
      return json{{"type", "decay"}, {"initial", s.initial}, {"rate", s.rate},
                  {"floor", s.limit}, {"stages", s.stages}};
    case Schedule::Mode::anneal_to_one:
      return json{{"type", "anneal"}, {"initial", s.initial}, {"rate", s.rate},
                  {"ceiling", s.limit}, {"stages", s.stages}};
  }
  throw std::logic_error("schedule_to_json: unknown mode");
}

std::shared_ptr<Environment> make_environment(const json& spec) {
  if (!spec.is_object() || !spec.contains("name"))
    throw std::invalid_argument("config: environment needs a 'name'");
  std::string name = spec.at("name").get<std::string>();

  if (name == "particle") {
    check_keys(spec, {"name", "preset", "vx", "vy", "dt", "horizon", "domain",
                      "target", "obstacles"}, "environment");
    ParticleParams p;
    std::string preset = spec.value("preset", "three-obstacle");
    if (preset == "three-obstacle") p.layout = particle_three_obstacle_layout();
    else if (preset == "two-thin") p.layout = particle_two_thin_obstacle_layout();
    else throw std::invalid_argument("config: unknown particle preset '" + preset + "'");
    p.vx = spec.value("vx", p.vx);
    p.vy = spec.value("vy", p.vy);
    p.dt = spec.value("dt", p.dt);
    p.horizon = spec.value("horizon", p.horizon);
    if (spec.contains("domain")) p.layout.domain = box_from_json(spec.at("domain"));
    if (spec.contains("target")) p.layout.target = box_from_json(spec.at("target"));
    if (spec.contains("obstacles")) {
      p.layout.obstacles.clear();
      for (const auto& b : spec.at("obstacles")) p.layout.obstacles.push_back(box_from_json(b));
    }
    return std::make_shared<ParticleEnv>(std::move(p));
  }

  if (name == "dubins") {
    check_keys(spec, {"name", "preset", "v", "omega", "R", "r", "dt", "horizon",
                      "margin"}, "environment");
    std::string preset = spec.value("preset", "high");
    DubinsParams p = preset == "high" ? dubins_high_turn()
                     : preset == "low" ? dubins_low_turn()
                     : throw std::invalid_argument("config: unknown dubins preset '" + preset + "'");
    p.v = spec.value("v", p.v);
    p.omega = spec.value("omega", p.omega);
    p.R = spec.value("R", p.R);
    p.r = spec.value("r", p.r);
    p.dt = spec.value("dt", p.dt);
    p.horizon = spec.value("horizon", p.horizon);
    p.margin = spec.value("margin", p.margin);
    return std::make_shared<DubinsEnv>(p);
  }

  if (name == "lander") {
    check_keys(spec, {"name", "gravity", "main_accel", "side_accel", "turn_accel",
                      "dt", "horizon", "x_half", "y_top", "v_bound", "w_bound",
                      "terrain", "target"}, "environment");
    LanderParams p;
    p.gravity = spec.value("gravity", p.gravity);
    p.main_accel = spec.value("main_accel", p.main_accel);
    p.side_accel = spec.value("side_accel", p.side_accel);
    p.turn_accel = spec.value("turn_accel", p.turn_accel);
    p.dt = spec.value("dt", p.dt);
    p.horizon = spec.value("horizon", p.horizon);
    p.x_half = spec.value("x_half", p.x_half);
    p.y_top = spec.value("y_top", p.y_top);
    p.v_bound = spec.value("v_bound", p.v_bound);
    p.w_bound = spec.value("w_bound", p.w_bound);
    if (spec.contains("terrain")) {
      p.terrain.clear();
      for (const auto& v : spec.at("terrain"))
        p.terrain.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      if (p.terrain.size() < 2)
        throw std::invalid_argument("config: lander terrain needs at least 2 vertices");
    }
    if (spec.contains("target")) p.target = box_from_json(spec.at("target"));
    return std::make_shared<LanderEnv>(std::move(p));
  }

  if (name == "attack-defense") {
    check_keys(spec, {"name", "v", "omega", "R", "r", "beta", "dt", "horizon"},
               "environment");
    AttackDefenseParams p;
    p.v = spec.value("v", p.v);
    p.omega = spec.value("omega", p.omega);
    p.R = spec.value("R", p.R);
    p.r = spec.value("r", p.r);
    p.beta = spec.value("beta", p.beta);
    p.dt = spec.value("dt", p.dt);
    p.horizon = spec.value("horizon", p.horizon);
    return std::make_shared<AttackDefenseEnv>(p);
  }

  throw std::invalid_argument(
      "config: unknown environment '" + name +
      "' (expected particle, dubins, lander or attack-defense)");
}

namespace {

json environment_to_json(const Environment& env) {
  if (const auto* e = dynamic_cast<const ParticleEnv*>(&env)) {
    const auto& p = e->params();
    json obstacles = json::array();
    for (const auto& b : p.layout.obstacles) obstacles.push_back(box_to_json(b));
    return json{{"name", "particle"},    {"vx", p.vx},
                {"vy", p.vy},            {"dt", p.dt},
                {"horizon", p.horizon},  {"domain", box_to_json(p.layout.domain)},
                {"target", box_to_json(p.layout.target)}, {"obstacles", obstacles}};
  }
  if (const auto* e = dynamic_cast<const DubinsEnv*>(&env)) {
    const auto& p = e->params();
    return json{{"name", "dubins"}, {"v", p.v},   {"omega", p.omega},
                {"R", p.R},         {"r", p.r},   {"dt", p.dt},
                {"horizon", p.horizon}, {"margin", p.margin}};
  }
  if (const auto* e = dynamic_cast<const LanderEnv*>(&env)) {
    const auto& p = e->params();
    json terrain = json::array();
    for (const auto& v : p.terrain) terrain.push_back(json::array({v.x(), v.y()}));
    return json{{"name", "lander"},
                {"gravity", p.gravity},
                {"main_accel", p.main_accel},
                {"side_accel", p.side_accel},
                {"turn_accel", p.turn_accel},
                {"dt", p.dt},
                {"horizon", p.horizon},
                {"x_half", p.x_half},
                {"y_top", p.y_top},
                {"v_bound", p.v_bound},
                {"w_bound", p.w_bound},
                {"terrain", terrain},
                {"target", box_to_json(p.target)}};
  }
  if (const auto* e = dynamic_cast<const AttackDefenseEnv*>(&env)) {
    const auto& p = e->params();
    return json{{"name", "attack-defense"}, {"v", p.v},     {"omega", p.omega},
                {"R", p.R},                 {"r", p.r},     {"beta", p.beta},
                {"dt", p.dt},               {"horizon", p.horizon}};
  }
  throw std::logic_error("environment_to_json: unknown environment type");
}

Termination termination_from_string(const std::string& s) {
  if (s == "target-failure") return Termination::target_failure;
  if (s == "failure-boundary") return Termination::failure_boundary;
  if (s == "boundary") return Termination::boundary;
  throw std::invalid_argument("config: unknown termination '" + s +
                              "' (expected target-failure, failure-boundary or boundary)");
}

std::string termination_to_string(Termination t) {
  switch (t) {
    case Termination::target_failure: return "target-failure";
    case Termination::failure_boundary: return "failure-boundary";
    case Termination::boundary: return "boundary";
  }
  return "target-failure";
}

InitMode init_from_string(const std::string& s) {
  if (s == "none") return InitMode::none;
  if (s == "max_lg") return InitMode::max_lg;
  if (s == "g") return InitMode::safety_margin;
  throw std::invalid_argument("config: unknown init mode '" + s +
                              "' (expected none, max_lg or g)");
}

std::string init_to_string(InitMode m) {
  switch (m) {
    case InitMode::none: return "none";
    case InitMode::max_lg: return "max_lg";
    case InitMode::safety_margin: return "g";
  }
  return "none";
}

// Per-environment training defaults (architecture, budget, optimizer,
// discount handling, buffer size, initialization).
void apply_train_defaults(TrainConfig& t, const std::string& env_name,
                          VecI& validation_counts) {
  if (env_name == "particle") {
    t.hidden = {100, 20};
    t.total_updates = 400000;
    t.adamw = false;
    t.gamma = constant_schedule(0.9999);
    t.buffer_capacity = 10000;
    t.init = InitMode::none;
    validation_counts = VecI{{21, 61}};
  } else if (env_name == "dubins") {
    t.hidden = {100, 20};
    t.total_updates = 400000;
    t.adamw = true;
    t.gamma = constant_schedule(0.9999);
    t.buffer_capacity = 10000;
    t.init = InitMode::max_lg;
  } else if (env_name == "lander") {
    t.hidden = {512, 512, 512};
    t.total_updates = 5000000;
    t.adamw = true;
    t.gamma = default_gamma_schedule();
    t.buffer_capacity = 50000;
    t.init = InitMode::safety_margin;
  } else if (env_name == "attack-defense") {
    t.hidden = {512, 512, 512};
    t.total_updates = 4000000;
    t.adamw = true;
    t.gamma = default_gamma_schedule();
    t.buffer_capacity = 50000;
    t.init = InitMode::max_lg;
  }
}

void parse_train(const json& s, TrainConfig& t) {
  for (const auto& [key, value] : s.items()) {
    if (key == "name" || key == "grid") continue;
    else if (key == "hidden") {
      t.hidden.clear();
      for (const auto& h : value) t.hidden.push_back(h.get<int>());
    } else if (key == "total_updates") t.total_updates = value.get<long>();
    else if (key == "batch") t.batch = value.get<int>();
    else if (key == "buffer") t.buffer_capacity = value.get<std::size_t>();
    else if (key == "warmup") t.warmup = value.get<std::size_t>();
    else if (key == "tau") t.tau = value.get<double>();
    else if (key == "lr") t.lr = schedule_from_json(value);
    else if (key == "epsilon") t.epsilon = schedule_from_json(value);
    else if (key == "gamma") t.gamma = schedule_from_json(value);
    else if (key == "optimizer") {
      std::string opt = value.get<std::string>();
      if (opt == "adam") t.adamw = false;
      else if (opt == "adamw") t.adamw = true;
      else throw std::invalid_argument("config: unknown optimizer '" + opt + "'");
    } else if (key == "weight_decay") t.weight_decay = value.get<double>();
    else if (key == "rho") t.rho = value.get<double>();
    else if (key == "termination") t.termination = termination_from_string(value.get<std::string>());
    else if (key == "init") t.init = init_from_string(value.get<std::string>());
    else if (key == "pretrain_budget") t.pretrain_budget = value.get<long>();
    else if (key == "pretrain_tol") t.pretrain_tol = value.get<double>();
    else if (key == "metrics_every") t.metrics_every = value.get<long>();
    else if (key == "eval_every") t.eval_every = value.get<long>();
    else if (key == "eval_horizon") t.eval_horizon = value.get<int>();
    else if (key == "divergence_loss") t.divergence_loss = value.get<double>();
    else throw std::invalid_argument("config: unknown key '" + key + "' in solver");
  }
}

json train_to_json(const std::string& name, const TrainConfig& t, const VecI& grid) {
  json j{{"name", name},
         {"hidden", t.hidden},
         {"total_updates", t.total_updates},
         {"batch", t.batch},
         {"buffer", t.buffer_capacity},
         {"warmup", t.warmup},
         {"tau", t.tau},
         {"lr", schedule_to_json(t.lr)},
         {"epsilon", schedule_to_json(t.epsilon)},
         {"gamma", schedule_to_json(t.gamma)},
         {"optimizer", t.adamw ? "adamw" : "adam"},
         {"weight_decay", t.weight_decay},
         {"rho", t.rho},
         {"termination", termination_to_string(t.termination)},
         {"init", init_to_string(t.init)},
         {"pretrain_budget", t.pretrain_budget},
         {"pretrain_tol", t.pretrain_tol},
         {"metrics_every", t.metrics_every},
         {"eval_every", t.eval_every},
         {"eval_horizon", t.eval_horizon},
         {"divergence_loss", t.divergence_loss}};
  (void)grid;
  return j;
}

ProbeSpec probes_from_json(const json& j) {
  ProbeSpec p;
  check_keys(j, {"counts", "samples"}, "probes");
  if (j.contains("counts")) p.grid_counts = veci_from_json(j.at("counts"));
  if (j.contains("samples")) p.samples = j.at("samples").get<int>();
  return p;
}

json probes_to_json(const ProbeSpec& p) {
  json j;
  if (p.grid_counts.size() > 0) j["counts"] = veci_to_json(p.grid_counts);
  else j["samples"] = p.samples;
  return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j, {"environment", "solver", "seed", "out", "artifact", "validation",
                 "evaluate", "rollout", "exhaustive"}, "top level");
  if (!j.contains("environment"))
    throw std::invalid_argument("config: missing 'environment'");
  if (!j.contains("solver")) throw std::invalid_argument("config: missing 'solver'");

  ExperimentConfig c;
  c.env = make_environment(j.at("environment"));
  c.seed = j.value("seed", 0ull);
  c.out_dir = j.value("out", "out");
  c.artifact = j.value("artifact", "");

  const json& s = j.at("solver");
  if (!s.is_object() || !s.contains("name"))
    throw std::invalid_argument("config: solver needs a 'name'");
  c.solver = s.at("name").get<std::string>();
  const std::string& env_name = c.env->name();

  if (c.solver == "value-iteration") {
    check_keys(s, {"name", "gamma", "tol", "max_sweeps", "grid", "interpolate"},
               "solver");
    if (env_name == "particle") c.grid_counts = VecI{{81, 241}};
    else if (env_name == "dubins") c.grid_counts = VecI{{61, 61, 60}};
    if (s.contains("grid")) c.grid_counts = veci_from_json(s.at("grid"));
    if (c.grid_counts.size() == 0)
      throw std::invalid_argument("config: value-iteration needs solver.grid for " + env_name);
    c.vi.gamma = s.value("gamma", 0.9999);
    c.vi.tol = s.value("tol", 1e-6);
    c.vi.max_sweeps = s.value("max_sweeps", 300000l);
    c.vi_interpolate = s.value("interpolate", false);
  } else if (c.solver == "tabular-q") {
    check_keys(s, {"name", "grid", "total_updates", "gamma", "epsilon", "rate",
                   "rm_exponent", "alpha", "episode_cap", "metrics_every"}, "solver");
    if (env_name == "particle") c.grid_counts = VecI{{41, 121}};
    if (s.contains("grid")) c.grid_counts = veci_from_json(s.at("grid"));
    if (c.grid_counts.size() == 0)
      throw std::invalid_argument("config: tabular-q needs solver.grid for " + env_name);
    c.ql.total_updates = s.value("total_updates", c.ql.total_updates);
    if (s.contains("gamma")) c.ql.gamma = schedule_from_json(s.at("gamma"));
    if (s.contains("epsilon")) c.ql.epsilon = schedule_from_json(s.at("epsilon"));
    if (s.contains("rate")) {
      std::string rate = s.at("rate").get<std::string>();
      if (rate == "robbins-monro") c.ql.use_global_rate = false;
      else if (rate == "global") c.ql.use_global_rate = true;
      else throw std::invalid_argument("config: unknown rate mode '" + rate + "'");
    }
    c.ql.rm_exponent = s.value("rm_exponent", c.ql.rm_exponent);
    if (s.contains("alpha")) c.ql.alpha = schedule_from_json(s.at("alpha"));
    c.ql.episode_cap = s.value("episode_cap", 0);
    c.ql.metrics_every = s.value("metrics_every", c.ql.metrics_every);
    c.ql.seed = c.seed;
  } else if (c.solver == "ddqn" || c.solver == "minimax-ddqn" ||
             c.solver == "sum-baseline") {
    apply_train_defaults(c.train, env_name, c.validation_counts);
    if (c.solver == "sum-baseline") {
      c.train.objective = Objective::sum_cost;
      c.train.termination = Termination::boundary;
      c.train.gamma = constant_schedule(0.95);
      c.train.init = InitMode::none;
    }
    if (c.solver == "minimax-ddqn" && env_name != "attack-defense")
      throw std::invalid_argument("config: minimax-ddqn requires the attack-defense environment");
    parse_train(s, c.train);
    c.train.seed = c.seed;
  } else {
    throw std::invalid_argument(
        "config: unknown solver '" + c.solver +
        "' (expected value-iteration, tabular-q, ddqn, minimax-ddqn or sum-baseline)");
  }

  if (j.contains("validation")) {
    check_keys(j.at("validation"), {"counts"}, "validation");
    c.validation_counts = veci_from_json(j.at("validation").at("counts"));
  }

  if (j.contains("evaluate")) {
    const json& e = j.at("evaluate");
    check_keys(e, {"probes", "horizon", "interpolate", "gamma_ladder",
                   "reference_gamma", "rollout_membership"}, "evaluate");
    if (e.contains("probes")) c.evaluate.probes = probes_from_json(e.at("probes"));
    c.evaluate.horizon = e.value("horizon", 0);
    c.evaluate.interpolate = e.value("interpolate", false);
    if (e.contains("gamma_ladder"))
      c.evaluate.gamma_ladder = e.at("gamma_ladder").get<std::vector<double>>();
    c.evaluate.reference_gamma = e.value("reference_gamma", 0.999999);
    c.evaluate.rollout_membership_check = e.value("rollout_membership", false);
  }

  if (j.contains("rollout")) {
    const json& r = j.at("rollout");
    check_keys(r, {"starts", "samples", "horizon"}, "rollout");
    if (r.contains("starts"))
      for (const auto& st : r.at("starts")) c.rollout.starts.push_back(vec_from_json(st));
    c.rollout.samples = r.value("samples", 10);
    c.rollout.horizon = r.value("horizon", 0);
  }

  if (j.contains("exhaustive")) {
    const json& x = j.at("exhaustive");
    check_keys(x, {"intervals", "steps_per_interval", "rounds", "starts", "samples"},
               "exhaustive");
    c.exhaustive.config.intervals = x.value("intervals", 10);
    c.exhaustive.config.steps_per_interval = x.value("steps_per_interval", 5);
    c.exhaustive.config.rounds = x.value("rounds", 2);
    if (x.contains("starts"))
      for (const auto& st : x.at("starts"))
        c.exhaustive.starts.push_back(vec_from_json(st));
    c.exhaustive.samples = x.value("samples", 1);
  }

  // Resolved snapshot: every knob explicit, so re-loading it reruns the
  // experiment identically.
  json solver_json;
  if (c.solver == "value-iteration") {
    solver_json = json{{"name", c.solver},        {"gamma", c.vi.gamma},
                       {"tol", c.vi.tol},         {"max_sweeps", c.vi.max_sweeps},
                       {"grid", veci_to_json(c.grid_counts)},
                       {"interpolate", c.vi_interpolate}};
  } else if (c.solver == "tabular-q") {
    solver_json = json{{"name", c.solver},
                       {"grid", veci_to_json(c.grid_counts)},
                       {"total_updates", c.ql.total_updates},
                       {"gamma", schedule_to_json(c.ql.gamma)},
                       {"epsilon", schedule_to_json(c.ql.epsilon)},
                       {"rate", c.ql.use_global_rate ? "global" : "robbins-monro"},
                       {"rm_exponent", c.ql.rm_exponent},
                       {"alpha", schedule_to_json(c.ql.alpha)},
                       {"episode_cap", c.ql.episode_cap},
                       {"metrics_every", c.ql.metrics_every}};
  } else {
    solver_json = train_to_json(c.solver, c.train, c.grid_counts);
  }
  c.raw = json{{"environment", environment_to_json(*c.env)},
               {"solver", solver_json},
               {"seed", c.seed},
               {"out", c.out_dir}};
  if (!c.artifact.empty()) c.raw["artifact"] = c.artifact;
  if (c.validation_counts.size() > 0)
    c.raw["validation"] = json{{"counts", veci_to_json(c.validation_counts)}};
  c.raw["evaluate"] = json{{"probes", probes_to_json(c.evaluate.probes)},
                           {"horizon", c.evaluate.horizon},
                           {"interpolate", c.evaluate.interpolate},
                           {"gamma_ladder", c.evaluate.gamma_ladder},
                           {"reference_gamma", c.evaluate.reference_gamma},
                           {"rollout_membership", c.evaluate.rollout_membership_check}};
  json rollout_json{{"samples", c.rollout.samples}, {"horizon", c.rollout.horizon}};
  if (!c.rollout.starts.empty()) {
    json starts = json::array();
    for (const auto& st : c.rollout.starts) starts.push_back(vec_to_json(st));
    rollout_json["starts"] = starts;
  }
  c.raw["rollout"] = rollout_json;
  json ex_json{{"intervals", c.exhaustive.config.intervals},
               {"steps_per_interval", c.exhaustive.config.steps_per_interval},
               {"rounds", c.exhaustive.config.rounds},
               {"samples", c.exhaustive.samples}};
  if (!c.exhaustive.starts.empty()) {
    json starts = json::array();
    for (const auto& st : c.exhaustive.starts) starts.push_back(vec_to_json(st));
    ex_json["starts"] = starts;
  }
  c.raw["exhaustive"] = ex_json;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return config_from_json(j);
}

std::vector<Vec> probe_states(const Environment& env, const ProbeSpec& spec,
                              std::uint64_t seed) {
  std::vector<Vec> out;
  if (spec.grid_counts.size() > 0) {
    if (spec.grid_counts.size() != env.state_dim())
      throw std::invalid_argument("probe grid dimension does not match the environment");
    Grid g = build_grid(env, spec.grid_counts);
    out.reserve(g.total_cells());
    for (long c = 0; c < g.total_cells(); ++c) out.push_back(g.center(c));
  } else {
    Rng rng = Rng::stream(seed, "probes");
    out.reserve(spec.samples);
    for (int i = 0; i < spec.samples; ++i) out.push_back(env.sample_state(rng));
  }
  return out;
}

}  // namespace ra
