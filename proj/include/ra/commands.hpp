#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ra/config.hpp"

namespace ra {

// Process exit codes shared by all commands.
constexpr int exit_ok = 0;
constexpr int exit_config = 2;   // invalid config / artifact mismatch
constexpr int exit_numeric = 3;  // non-convergence, divergence, counterexample
constexpr int exit_io = 4;       // unreadable or unwritable files

// Options collected from the command line.  Precedence for the output
// directory: --out, then the RA_OUT_DIR environment variable, then the
// config file.
struct CommandOptions {
  std::string config_path;
  std::string artifact;                   // overrides config "artifact"
  std::string out_dir;                    // overrides config "out"
  std::optional<std::uint64_t> seed;      // overrides config "seed"
  std::vector<double> gamma_ladder;       // overrides evaluate.gamma_ladder
  std::string slice;                      // "dim=coord,dim=coord" for export-grid
};

// Run the configured solver and write artifacts, metrics and the resolved
// config snapshot into the output directory.
int cmd_train(const CommandOptions& opt);

// Certify an artifact: rollout confusion report, mask export and (for value
// grids) the discount-ladder nesting report.
int cmd_evaluate(const CommandOptions& opt);

// Export a 2-D slice of a value-grid artifact with its zero-level contour.
int cmd_export_grid(const CommandOptions& opt);

// Greedy closed-loop rollouts from configured or sampled start states.
int cmd_rollout(const CommandOptions& opt);

// Exhaustive defender-sequence validation of a game policy artifact.
int cmd_validate_exhaustive(const CommandOptions& opt);

}  // namespace ra
