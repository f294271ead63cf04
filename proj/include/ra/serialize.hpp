#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ra/certify.hpp"
#include "ra/ddqn.hpp"
#include "ra/grid.hpp"
#include "ra/tabular.hpp"

// Text artifact formats.  Grid-valued artifacts are comma-separated text
// with a fixed header and decimal values at 9 significant digits; network
// weights are JSON with full-precision doubles; metrics are JSON lines.

namespace ra {

std::string format_g9(double v);

void write_value_grid(const std::string& path, const ValueGrid& vg);
ValueGrid read_value_grid(const std::string& path);

void write_qtable(const std::string& path, const QTable& qt);
QTable read_qtable(const std::string& path);

void write_mask(const std::string& path, const MaskArray& mask, const Grid& grid);
std::pair<MaskArray, Grid> read_mask(const std::string& path);

void write_network(const std::string& path, const NetworkParams& net);
NetworkParams read_network(const std::string& path);

void write_train_metrics(const std::string& path,
                         const std::vector<TrainMetricsRow>& rows);
void write_qlearn_metrics(const std::string& path,
                          const std::vector<QLearnMetricsRow>& rows);

// 2-D slice of a value grid: all dimensions in `fixed` pinned to the cell
// nearest the given coordinate.  Writes the slice table and a marching-
// squares zero-level contour next to it (<path stem>.contour.csv).
void write_grid_slice(const std::string& path, const ValueGrid& vg,
                      const std::vector<std::pair<int, double>>& fixed);

void write_rollout(const std::string& path, const RolloutRecord& rec);

nlohmann::json confusion_to_json(const ConfusionReport& rep);
nlohmann::json exhaustive_to_json(const ExhaustiveReport& rep);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace ra
