#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ra/config.hpp"
#include "ra/tabular.hpp"
#include "support/oracles.hpp"

using namespace ra;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_vi() {
  return json{{"environment", {{"name", "particle"}}},
              {"solver", {{"name", "value-iteration"}}}};
}

fs::path cli_dir() {
  fs::path dir = fs::temp_directory_path() / "ra_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the command-line binary through the shell; returns its exit code.
int run_ractl(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + RACTL_PATH " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("minimal particle config resolves grid and discount defaults") {
  ExperimentConfig c = config_from_json(minimal_vi());
  CHECK(c.solver == "value-iteration");
  CHECK(c.env->name() == "particle");
  REQUIRE(c.grid_counts.size() == 2);
  CHECK(c.grid_counts[0] == 81);
  CHECK(c.grid_counts[1] == 241);
  CHECK(c.vi.gamma == doctest::Approx(0.9999));
  CHECK(c.vi.tol == doctest::Approx(1e-6));
  CHECK(c.seed == 0);
  CHECK(c.out_dir == "out");
}

TEST_CASE("ddqn defaults mirror the published training recipe") {
  json j = minimal_vi();
  j["solver"] = {{"name", "ddqn"}};
  ExperimentConfig c = config_from_json(j);
  CHECK(c.train.total_updates == 400000);
  CHECK(c.train.hidden == std::vector<int>{100, 20});
  CHECK(c.train.buffer_capacity == 10000);
  CHECK(c.train.batch == 64);
  REQUIRE(c.validation_counts.size() == 2);
  CHECK(c.validation_counts[0] == 21);
  CHECK(c.validation_counts[1] == 61);
  CHECK(c.train.objective == Objective::reach_avoid);
  CHECK(c.train.termination == Termination::target_failure);
}

TEST_CASE("sum baseline solver flips objective, termination and discount") {
  json j = minimal_vi();
  j["solver"] = {{"name", "sum-baseline"}, {"rho", 0.1}};
  ExperimentConfig c = config_from_json(j);
  CHECK(c.train.objective == Objective::sum_cost);
  CHECK(c.train.termination == Termination::boundary);
  CHECK(c.train.rho == doctest::Approx(0.1));
  CHECK(evaluate_schedule(c.train.gamma, 0, 100) == doctest::Approx(0.95));
  CHECK(evaluate_schedule(c.train.gamma, 99, 100) == doctest::Approx(0.95));
}

TEST_CASE("resolved snapshot reloads to an identical snapshot") {
  json j = minimal_vi();
  j["seed"] = 7;
  j["evaluate"] = {{"probes", {{"counts", {11, 31}}}}, {"gamma_ladder", {0.5, 0.9}}};
  ExperimentConfig c1 = config_from_json(j);
  ExperimentConfig c2 = config_from_json(c1.raw);
  CHECK(c1.raw == c2.raw);
  CHECK(c2.seed == 7);
  CHECK((c2.grid_counts.array() == c1.grid_counts.array()).all());
}

TEST_CASE("config rejection covers unknown keys and inconsistent solvers") {
  json j = minimal_vi();
  j["solevr"] = 1;  // typo key
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);

  CHECK_THROWS_AS(config_from_json(json{{"solver", {{"name", "ddqn"}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"environment", {{"name", "particle"}}}}),
                  std::invalid_argument);

  json bad = minimal_vi();
  bad["solver"] = {{"name", "polynomial"}};
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);

  json mm = minimal_vi();
  mm["solver"] = {{"name", "minimax-ddqn"}};
  CHECK_THROWS_AS(config_from_json(mm), std::invalid_argument);

  json env = minimal_vi();
  env["environment"] = {{"name", "pendulum"}};
  CHECK_THROWS_AS(config_from_json(env), std::invalid_argument);
}

TEST_CASE("probe grids enumerate cell centers of the declared domain") {
  ExperimentConfig c = config_from_json(minimal_vi());
  ProbeSpec spec;
  spec.grid_counts = VecI{{11, 31}};
  std::vector<Vec> probes = probe_states(*c.env, spec, 0);
  REQUIRE(probes.size() == 11u * 31u);
  CHECK(probes.front()[0] == doctest::Approx(-2.0 + 4.0 / 22.0));
  CHECK(probes.front()[1] == doctest::Approx(-2.0 + 12.0 / 62.0));
  CHECK(probes.back()[0] == doctest::Approx(2.0 - 4.0 / 22.0));
  CHECK(probes.back()[1] == doctest::Approx(10.0 - 12.0 / 62.0));

  ProbeSpec wrong;
  wrong.grid_counts = VecI{{5, 5, 5}};
  CHECK_THROWS_AS(probe_states(*c.env, wrong, 0), std::invalid_argument);
}

TEST_CASE("sampled probes are seed-deterministic and stay in the domain") {
  ExperimentConfig c = config_from_json(minimal_vi());
  ProbeSpec spec;
  spec.samples = 50;
  auto a = probe_states(*c.env, spec, 42);
  auto b = probe_states(*c.env, spec, 42);
  auto d = probe_states(*c.env, spec, 43);
  REQUIRE(a.size() == 50);
  REQUIRE(b.size() == 50);
  bool same = true, diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && (a[i].array() == b[i].array()).all();
    diff = diff || (a[i].array() != d[i].array()).any();
    CHECK(a[i][0] >= -2.0);
    CHECK(a[i][0] <= 2.0);
    CHECK(a[i][1] >= -2.0);
    CHECK(a[i][1] <= 10.0);
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("schedules round trip through their json form") {
  Schedule decay;
  decay.mode = Schedule::Mode::decay;
  decay.initial = 0.001;
  decay.rate = 0.8;
  decay.limit = 1e-4;
  json dj = schedule_to_json(decay);
  Schedule back = schedule_from_json(dj);
  CHECK(schedule_to_json(back) == dj);
  CHECK(evaluate_schedule(back, 0, 100) == doctest::Approx(0.001));
  CHECK(evaluate_schedule(back, 50, 100) ==
        doctest::Approx(0.001 * std::pow(0.8, 10)));
  CHECK(evaluate_schedule(back, 99, 100) == doctest::Approx(1e-4));

  Schedule anneal = schedule_from_json(json{{"type", "anneal"},
                                            {"initial", 0.2},
                                            {"rate", 0.5},
                                            {"ceiling", 0.999999}});
  CHECK(evaluate_schedule(anneal, 0, 10) == doctest::Approx(0.8));
  CHECK(schedule_from_json(schedule_to_json(anneal)).limit ==
        doctest::Approx(0.999999));

  // Bare numbers are shorthand for a constant schedule.
  Schedule c = schedule_from_json(json(0.42));
  CHECK(evaluate_schedule(c, 7, 10) == doctest::Approx(0.42));
  CHECK(schedule_to_json(c)["type"] == "constant");

  CHECK_THROWS_AS(schedule_from_json(json{{"type", "linear"}, {"value", 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS(schedule_from_json(json{{"type", "decay"}, {"initial", 1.0}}));
}

TEST_CASE("load_config reports unreadable paths") {
  CHECK_THROWS(load_config("/nonexistent/path/config.json"));
}

TEST_CASE("cli train writes the full artifact set and is reproducible") {
  auto dir = cli_dir();
  fs::remove_all(dir / "vi1");
  fs::remove_all(dir / "vi2");
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_vi.json";

  int rc = run_ractl("train --config " + cfg + " --out " + (dir / "vi1").string());
  REQUIRE(rc == 0);
  for (const char* name : {"value.csv", "mask.csv", "metrics.jsonl", "summary.json",
                           "resolved_config.json"})
    CHECK(fs::exists(dir / "vi1" / name));

  auto summary = json::parse(std::ifstream(dir / "vi1" / "summary.json"));
  CHECK(summary["solver"] == "value-iteration");
  CHECK(summary["converged"].get<bool>());
  CHECK(summary["cells"].get<long>() == 21 * 61);
  CHECK(summary["mask_cells"].get<long>() > 0);

  rc = run_ractl("train --config " + cfg + " --out " + (dir / "vi2").string());
  REQUIRE(rc == 0);
  CHECK(slurp(dir / "vi1" / "value.csv") == slurp(dir / "vi2" / "value.csv"));
  CHECK(slurp(dir / "vi1" / "mask.csv") == slurp(dir / "vi2" / "mask.csv"));
}

TEST_CASE("cli retrain from the resolved snapshot reproduces the value grid") {
  auto dir = cli_dir();
  fs::remove_all(dir / "vi3");
  REQUIRE(fs::exists(dir / "vi1" / "resolved_config.json"));  // prior case ran

  int rc = run_ractl("train --config " + (dir / "vi1" / "resolved_config.json").string() +
                     " --out " + (dir / "vi3").string());
  REQUIRE(rc == 0);
  CHECK(slurp(dir / "vi1" / "value.csv") == slurp(dir / "vi3" / "value.csv"));
}

TEST_CASE("cli seed override lands in the resolved snapshot") {
  auto dir = cli_dir();
  fs::remove_all(dir / "vi_seed");
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_vi.json";
  int rc = run_ractl("train --config " + cfg + " --seed 7 --out " +
                     (dir / "vi_seed").string());
  REQUIRE(rc == 0);
  auto resolved = json::parse(std::ifstream(dir / "vi_seed" / "resolved_config.json"));
  CHECK(resolved["seed"].get<std::uint64_t>() == 7);
}

TEST_CASE("cli honors the output directory environment variable") {
  auto dir = cli_dir();
  fs::remove_all(dir / "vi_env");
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_vi.json";
  int rc = run_ractl("train --config " + cfg,
                     "RA_OUT_DIR=" + (dir / "vi_env").string() + " ");
  REQUIRE(rc == 0);
  CHECK(fs::exists(dir / "vi_env" / "value.csv"));
}

TEST_CASE("cli maps error classes to distinct exit codes") {
  auto dir = cli_dir();
  auto bad = dir / "bad_solver.json";
  {
    std::ofstream out(bad);
    out << R"({"environment": {"name": "particle"}, "solver": {"name": "nope"}})";
  }
  CHECK(run_ractl("train --config " + bad.string()) == 2);

  auto malformed = dir / "malformed.json";
  {
    std::ofstream out(malformed);
    out << "{ not json";
  }
  CHECK(run_ractl("train --config " + malformed.string()) == 2);

  CHECK(run_ractl("train --config " + (dir / "no_such_file.json").string()) == 4);
}

TEST_CASE("cli evaluate emits confusion, ladder and membership reports") {
  auto dir = cli_dir();
  fs::remove_all(dir / "eval");
  REQUIRE(fs::exists(dir / "vi1" / "value.csv"));
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_vi.json";

  int rc = run_ractl("evaluate --config " + cfg + " --artifact " +
                     (dir / "vi1" / "value.csv").string() + " --out " +
                     (dir / "eval").string());
  REQUIRE(rc == 0);
  auto rep = json::parse(std::ifstream(dir / "eval" / "evaluation.json"));
  CHECK(rep["probes"].get<long>() == 11 * 31);
  CHECK(rep["confusion"].contains("fsr"));
  CHECK(rep["rollout_membership"].contains("false_success"));
  REQUIRE(rep.contains("ladder"));
  CHECK(rep["ladder"]["nested"].get<bool>());
  CHECK(rep["ladder"]["gammas"].size() == 3);
  CHECK(fs::exists(dir / "eval" / "mask.csv"));
}

TEST_CASE("cli export-grid writes a slice with its contour sidecar") {
  auto dir = cli_dir();
  fs::remove_all(dir / "slice");
  REQUIRE(fs::exists(dir / "vi1" / "value.csv"));
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_vi.json";

  int rc = run_ractl("export-grid --config " + cfg + " --artifact " +
                     (dir / "vi1" / "value.csv").string() + " --out " +
                     (dir / "slice").string());
  REQUIRE(rc == 0);
  CHECK(fs::exists(dir / "slice" / "slice.csv"));
  CHECK(fs::exists(dir / "slice" / "slice.contour.csv"));
}

TEST_CASE("cli rollout records one trace per configured start") {
  auto dir = cli_dir();
  fs::remove_all(dir / "roll");
  REQUIRE(fs::exists(dir / "vi1" / "value.csv"));
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_vi.json";

  int rc = run_ractl("rollout --config " + cfg + " --artifact " +
                     (dir / "vi1" / "value.csv").string() + " --out " +
                     (dir / "roll").string());
  REQUIRE(rc == 0);
  auto rep = json::parse(std::ifstream(dir / "roll" / "rollouts.json"));
  REQUIRE(rep["records"].size() == 1);  // one configured start overrides samples
  CHECK(fs::exists(dir / "roll" / "rollout_0.csv"));
  CHECK(!fs::exists(dir / "roll" / "rollout_1.csv"));
  long buckets = rep["successes"].get<long>() + rep["failures"].get<long>() +
                 rep["unfinished"].get<long>();
  CHECK(buckets == 1);
}

TEST_CASE("cli ddqn smoke run trains and checkpoints a network") {
  auto dir = cli_dir();
  fs::remove_all(dir / "dq");
  std::string cfg = std::string(RA_CONFIG_DIR) + "/ci_particle_ddqn.json";

  int rc = run_ractl("train --config " + cfg + " --out " + (dir / "dq").string());
  REQUIRE(rc == 0);
  for (const char* name : {"net.json", "target_net.json", "metrics.jsonl",
                           "summary.json", "resolved_config.json"})
    CHECK(fs::exists(dir / "dq" / name));
  auto summary = json::parse(std::ifstream(dir / "dq" / "summary.json"));
  CHECK(summary["updates"].get<long>() == 3000);
  CHECK(!summary["diverged"].get<bool>());
}
