#include "ra/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ra {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw std::runtime_error("cannot open " + path);
  }
  std::string next() {
    std::string line;
    if (!std::getline(in_, line))
      throw std::runtime_error(path_ + ":" + std::to_string(lineno_ + 1) +
                               ": unexpected end of file");
    ++lineno_;
    return line;
  }
  void expect(const std::string& key, const std::string& value) {
    std::string line = next();
    if (line != key + "," + value)
      throw std::runtime_error(path_ + ":" + std::to_string(lineno_) + ": expected '" +
                               key + "," + value + "', got '" + line + "'");
  }
  std::vector<std::string> fields(const std::string& key, int count = -1) {
    std::string line = next();
    auto f = split(line);
    if (f.empty() || f[0] != key)
      throw std::runtime_error(path_ + ":" + std::to_string(lineno_) + ": expected '" +
                               key + "' row, got '" + line + "'");
    f.erase(f.begin());
    if (count >= 0 && static_cast<int>(f.size()) != count)
      throw std::runtime_error(path_ + ":" + std::to_string(lineno_) + ": expected " +
                               std::to_string(count) + " fields for '" + key + "'");
    return f;
  }
  long lineno() const { return lineno_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  long lineno_ = 0;
};

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::runtime_error("malformed integer '" + s + "'");
  return v;
}

void write_grid_header(std::ostream& out, const Grid& grid) {
  out << "dims," << grid.dims() << "\n";
  out << "lower";
  for (int d = 0; d < grid.dims(); ++d) out << "," << format_g9(grid.lower[d]);
  out << "\nupper";
  for (int d = 0; d < grid.dims(); ++d) out << "," << format_g9(grid.upper[d]);
  out << "\ncounts";
  for (int d = 0; d < grid.dims(); ++d) out << "," << grid.counts[d];
  out << "\nperiodic";
  for (int d = 0; d < grid.dims(); ++d) out << "," << (grid.periodic[d] ? 1 : 0);
  out << "\n";
}

Grid read_grid_header(LineReader& r) {
  int dims = static_cast<int>(parse_long(r.fields("dims", 1)[0]));
  if (dims < 1) throw std::runtime_error(r.path() + ": dims must be positive");
  auto lo = r.fields("lower", dims);
  auto hi = r.fields("upper", dims);
  auto cn = r.fields("counts", dims);
  auto pe = r.fields("periodic", dims);
  Vec lower(dims), upper(dims);
  VecI counts(dims);
  std::vector<bool> periodic(dims);
  for (int d = 0; d < dims; ++d) {
    lower[d] = parse_double(lo[d]);
    upper[d] = parse_double(hi[d]);
    counts[d] = static_cast<int>(parse_long(cn[d]));
    periodic[d] = parse_long(pe[d]) != 0;
  }
  return build_grid(std::move(lower), std::move(upper), std::move(counts),
                    std::move(periodic));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_value_grid(const std::string& path, const ValueGrid& vg) {
  auto out = open_out(path);
  out << "ra_valuegrid,v1\n";
  write_grid_header(out, vg.grid);
  out << "values," << vg.values.size() << "\n";
  for (long i = 0; i < vg.values.size(); ++i) out << format_g9(vg.values[i]) << "\n";
}

ValueGrid read_value_grid(const std::string& path) {
  LineReader r(path);
  r.expect("ra_valuegrid", "v1");
  Grid grid = read_grid_header(r);
  long n = parse_long(r.fields("values", 1)[0]);
  if (n != grid.total_cells())
    throw std::runtime_error(path + ": value count does not match grid");
  Eigen::ArrayXd values(n);
  for (long i = 0; i < n; ++i) values[i] = parse_double(r.next());
  return ValueGrid{std::move(grid), std::move(values)};
}

void write_qtable(const std::string& path, const QTable& qt) {
  auto out = open_out(path);
  out << "ra_qtable,v1\n";
  write_grid_header(out, qt.grid);
  out << "actions," << qt.q.cols() << "\n";
  out << "values," << qt.q.rows() << "\n";
  for (long c = 0; c < qt.q.rows(); ++c) {
    for (int a = 0; a < qt.q.cols(); ++a)
      out << (a ? "," : "") << format_g9(qt.q(c, a));
    out << "\n";
  }
}

QTable read_qtable(const std::string& path) {
  LineReader r(path);
  r.expect("ra_qtable", "v1");
  Grid grid = read_grid_header(r);
  int actions = static_cast<int>(parse_long(r.fields("actions", 1)[0]));
  long rows = parse_long(r.fields("values", 1)[0]);
  if (rows != grid.total_cells())
    throw std::runtime_error(path + ": row count does not match grid");
  QTable qt;
  qt.grid = std::move(grid);
  qt.q.resize(rows, actions);
  for (long c = 0; c < rows; ++c) {
    auto f = split(r.next());
    if (static_cast<int>(f.size()) != actions)
      throw std::runtime_error(path + ": wrong number of action values in row " +
                               std::to_string(c));
    for (int a = 0; a < actions; ++a) qt.q(c, a) = parse_double(f[a]);
  }
  return qt;
}

void write_mask(const std::string& path, const MaskArray& mask, const Grid& grid) {
  if (mask.size() != grid.total_cells())
    throw std::invalid_argument("write_mask: mask size does not match grid");
  auto out = open_out(path);
  out << "ra_mask,v1\n";
  write_grid_header(out, grid);
  out << "values," << mask.size() << "\n";
  for (long i = 0; i < mask.size(); ++i) out << (mask[i] ? 1 : 0) << "\n";
}

std::pair<MaskArray, Grid> read_mask(const std::string& path) {
  LineReader r(path);
  r.expect("ra_mask", "v1");
  Grid grid = read_grid_header(r);
  long n = parse_long(r.fields("values", 1)[0]);
  if (n != grid.total_cells())
    throw std::runtime_error(path + ": value count does not match grid");
  MaskArray mask(n);
  for (long i = 0; i < n; ++i) mask[i] = parse_long(r.next()) != 0;
  return {std::move(mask), std::move(grid)};
}

void write_network(const std::string& path, const NetworkParams& net) {
  json j;
  j["format"] = "ra_network";
  j["version"] = 1;
  j["activation"] = "tanh";
  j["layer_sizes"] = net.layer_sizes();
  json layers = json::array();
  for (std::size_t k = 0; k < net.W.size(); ++k) {
    json layer;
    layer["rows"] = net.W[k].rows();
    layer["cols"] = net.W[k].cols();
    std::vector<double> w(net.W[k].size());
    // Row-major export regardless of Eigen's storage order.
    for (long i = 0; i < net.W[k].rows(); ++i)
      for (long c = 0; c < net.W[k].cols(); ++c)
        w[i * net.W[k].cols() + c] = net.W[k](i, c);
    layer["weights"] = w;
    layer["bias"] = std::vector<double>(net.b[k].data(), net.b[k].data() + net.b[k].size());
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  write_json(path, j);
}

NetworkParams read_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j = json::parse(in);
  if (j.value("format", "") != "ra_network")
    throw std::runtime_error(path + ": not a network artifact");
  NetworkParams net;
  for (const auto& layer : j.at("layers")) {
    long rows = layer.at("rows").get<long>();
    long cols = layer.at("cols").get<long>();
    auto w = layer.at("weights").get<std::vector<double>>();
    auto b = layer.at("bias").get<std::vector<double>>();
    if (static_cast<long>(w.size()) != rows * cols ||
        static_cast<long>(b.size()) != rows)
      throw std::runtime_error(path + ": layer shape mismatch");
    Mat W(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long c = 0; c < cols; ++c) W(i, c) = w[i * cols + c];
    net.W.push_back(std::move(W));
    net.b.push_back(Eigen::Map<const Vec>(b.data(), rows));
  }
  if (net.W.empty()) throw std::runtime_error(path + ": network has no layers");
  return net;
}

namespace {

json row_to_json(const TrainMetricsRow& r) {
  json j{{"update", r.update}, {"loss", r.loss},     {"gamma", r.gamma},
         {"epsilon", r.epsilon}, {"lr", r.lr}};
  if (r.has_eval) j["success_ratio"] = r.success_ratio;
  return j;
}

json row_to_json(const QLearnMetricsRow& r) {
  return json{{"update", r.update},
              {"gamma", r.gamma},
              {"epsilon", r.epsilon},
              {"mean_abs_td", r.mean_abs_td}};
}

template <class Row>
void write_jsonl(const std::string& path, const std::vector<Row>& rows) {
  auto out = open_out(path);
  for (const auto& r : rows) out << row_to_json(r).dump() << "\n";
}

}  // namespace

void write_train_metrics(const std::string& path,
                         const std::vector<TrainMetricsRow>& rows) {
  write_jsonl(path, rows);
}

void write_qlearn_metrics(const std::string& path,
                          const std::vector<QLearnMetricsRow>& rows) {
  write_jsonl(path, rows);
}

void write_grid_slice(const std::string& path, const ValueGrid& vg,
                      const std::vector<std::pair<int, double>>& fixed) {
  const Grid& grid = vg.grid;
  std::vector<bool> is_fixed(grid.dims(), false);
  std::vector<int> fixed_idx(grid.dims(), 0);
  for (const auto& [dim, coord] : fixed) {
    if (dim < 0 || dim >= grid.dims())
      throw std::invalid_argument("write_grid_slice: fixed dimension out of range");
    if (is_fixed[dim])
      throw std::invalid_argument("write_grid_slice: dimension fixed twice");
    is_fixed[dim] = true;
    double t = (coord - grid.lower[dim]) / grid.pitch[dim];
    fixed_idx[dim] = std::clamp(static_cast<int>(std::floor(t)), 0, grid.counts[dim] - 1);
  }
  std::vector<int> axes;
  for (int d = 0; d < grid.dims(); ++d)
    if (!is_fixed[d]) axes.push_back(d);
  if (axes.size() != 2)
    throw std::invalid_argument("write_grid_slice: slice must leave exactly 2 free dimensions");

  const int ax0 = axes[0], ax1 = axes[1];
  const int n0 = grid.counts[ax0], n1 = grid.counts[ax1];
  Eigen::ArrayXXd slice(n0, n1);
  VecI idx(grid.dims());
  for (int d = 0; d < grid.dims(); ++d) idx[d] = fixed_idx[d];
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      idx[ax0] = i;
      idx[ax1] = j;
      slice(i, j) = vg.values[grid.flat_index(idx)];
    }

  auto out = open_out(path);
  out << "ra_gridslice,v1\n";
  out << "axes," << ax0 << "," << ax1 << "\n";
  out << "lower," << format_g9(grid.lower[ax0]) << "," << format_g9(grid.lower[ax1]) << "\n";
  out << "upper," << format_g9(grid.upper[ax0]) << "," << format_g9(grid.upper[ax1]) << "\n";
  out << "counts," << n0 << "," << n1 << "\n";
  out << "fixed";
  for (const auto& [dim, coord] : fixed) {
    (void)coord;  // header reports the snapped cell-center coordinate
    out << "," << dim << "="
        << format_g9(grid.lower[dim] + (fixed_idx[dim] + 0.5) * grid.pitch[dim]);
  }
  out << "\nvalues," << n0 * n1 << "\n";
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) out << (j ? "," : "") << format_g9(slice(i, j));
    out << "\n";
  }

  // Zero-level contour by marching squares over cell centers.
  std::string stem = path;
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  auto cout_ = open_out(stem + ".contour.csv");
  cout_ << "ra_contour,v1\nx1,y1,x2,y2\n";
  auto coord0 = [&](double i) { return grid.lower[ax0] + (i + 0.5) * grid.pitch[ax0]; };
  auto coord1 = [&](double j) { return grid.lower[ax1] + (j + 0.5) * grid.pitch[ax1]; };
  auto emit = [&](double x1, double y1, double x2, double y2) {
    cout_ << format_g9(x1) << "," << format_g9(y1) << "," << format_g9(x2) << ","
          << format_g9(y2) << "\n";
  };
  for (int i = 0; i + 1 < n0; ++i) {
    for (int j = 0; j + 1 < n1; ++j) {
      double v00 = slice(i, j), v10 = slice(i + 1, j);
      double v01 = slice(i, j + 1), v11 = slice(i + 1, j + 1);
      // Interpolated zero crossings on the four square edges.
      auto cross = [](double a, double b) { return a / (a - b); };
      std::vector<std::pair<double, double>> pts;
      if ((v00 <= 0) != (v10 <= 0)) pts.push_back({i + cross(v00, v10), static_cast<double>(j)});
      if ((v01 <= 0) != (v11 <= 0)) pts.push_back({i + cross(v01, v11), static_cast<double>(j + 1)});
      if ((v00 <= 0) != (v01 <= 0)) pts.push_back({static_cast<double>(i), j + cross(v00, v01)});
      if ((v10 <= 0) != (v11 <= 0)) pts.push_back({static_cast<double>(i + 1), j + cross(v10, v11)});
      if (pts.size() == 2) {
        emit(coord0(pts[0].first), coord1(pts[0].second), coord0(pts[1].first),
             coord1(pts[1].second));
      } else if (pts.size() == 4) {
        // Saddle: split by pairing along axis 1.
        emit(coord0(pts[2].first), coord1(pts[2].second), coord0(pts[0].first),
             coord1(pts[0].second));
        emit(coord0(pts[3].first), coord1(pts[3].second), coord0(pts[1].first),
             coord1(pts[1].second));
      }
    }
  }
}

void write_rollout(const std::string& path, const RolloutRecord& rec) {
  auto out = open_out(path);
  out << "ra_rollout,v1\n";
  out << "outcome," << outcome_name(rec.outcome) << "\n";
  out << "payoff," << format_g9(rec.payoff_value) << "\n";
  out << "steps," << rec.steps << "\n";
  int dim = rec.states.empty() ? 0 : static_cast<int>(rec.states.front().size());
  out << "columns,t";
  for (int d = 0; d < dim; ++d) out << ",s" << d;
  out << ",action,l,g\n";
  for (std::size_t t = 0; t < rec.states.size(); ++t) {
    out << t;
    for (int d = 0; d < dim; ++d) out << "," << format_g9(rec.states[t][d]);
    out << "," << (t < rec.actions.size() ? std::to_string(rec.actions[t]) : "-1");
    out << "," << format_g9(rec.trace.l[t]) << "," << format_g9(rec.trace.g[t]) << "\n";
  }
}

nlohmann::json confusion_to_json(const ConfusionReport& rep) {
  return json{{"true_success", rep.true_success},
              {"false_success", rep.false_success},
              {"true_failure", rep.true_failure},
              {"false_failure", rep.false_failure},
              {"fsr", rep.fsr},
              {"ffr", rep.ffr},
              {"fsr_defined", rep.fsr_defined},
              {"ffr_defined", rep.ffr_defined}};
}

nlohmann::json exhaustive_to_json(const ExhaustiveReport& rep) {
  json rounds = json::array();
  for (const auto& r : rep.rounds) {
    long counts[3] = {0, 0, 0};
    for (const auto& s : r.summaries) {
      if (s.outcome == Outcome::failure) ++counts[0];
      else if (s.outcome == Outcome::unfinished) ++counts[1];
      else ++counts[2];
    }
    json endpoint = json::array();
    for (double v : r.worst.states.back()) endpoint.push_back(v);
    rounds.push_back(json{{"sequences", static_cast<long>(r.summaries.size())},
                          {"failure", counts[0]},
                          {"unfinished", counts[1]},
                          {"success", counts[2]},
                          {"worst_sequence", r.worst_sequence},
                          {"worst_outcome", outcome_name(r.worst.outcome)},
                          {"worst_payoff", r.worst.payoff_value},
                          {"worst_endpoint", endpoint}});
  }
  return json{{"final_outcome", outcome_name(rep.final_outcome)},
              {"sequences_enumerated", rep.sequences_enumerated},
              {"rounds", rounds}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace ra
