// Command-line front end: train solvers, certify artifacts, export slices.

#include <optional>

#include <CLI11.hpp>

#include "ra/commands.hpp"

namespace {

void add_common(CLI::App* cmd, ra::CommandOptions& opt) {
  cmd->add_option("--config", opt.config_path, "experiment config file (JSON)")
      ->required();
  cmd->add_option("--seed", opt.seed, "master seed (overrides the config)");
  cmd->add_option("--out", opt.out_dir,
                  "output directory (overrides RA_OUT_DIR and the config)");
  cmd->add_option("--artifact", opt.artifact, "input artifact path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reach-avoid value iteration, Q-learning and certification"};
  app.require_subcommand(1);
  ra::CommandOptions opt;
  int rc = 0;

  auto* train = app.add_subcommand("train", "run the configured solver");
  add_common(train, opt);
  train->callback([&] { rc = ra::cmd_train(opt); });

  auto* evaluate =
      app.add_subcommand("evaluate", "rollout confusion report and mask export");
  add_common(evaluate, opt);
  evaluate
      ->add_option("--gamma-ladder", opt.gamma_ladder,
                   "discounts for the nesting report (value grids only)")
      ->delimiter(',');
  evaluate->callback([&] { rc = ra::cmd_evaluate(opt); });

  auto* export_grid =
      app.add_subcommand("export-grid", "2-D slice of a value grid with contour");
  add_common(export_grid, opt);
  export_grid->add_option("--slice", opt.slice,
                          "fixed coordinates, e.g. 2=0.0,3=0.0");
  export_grid->callback([&] { rc = ra::cmd_export_grid(opt); });

  auto* rollout = app.add_subcommand("rollout", "greedy closed-loop trajectories");
  add_common(rollout, opt);
  rollout->callback([&] { rc = ra::cmd_rollout(opt); });

  auto* exhaustive = app.add_subcommand(
      "validate-exhaustive", "enumerate defender sequences against a game policy");
  add_common(exhaustive, opt);
  exhaustive->callback([&] { rc = ra::cmd_validate_exhaustive(opt); });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
