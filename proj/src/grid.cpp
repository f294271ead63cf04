#include "ra/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ra {

long Grid::total_cells() const {
  long n = 1;
  for (int d = 0; d < dims(); ++d) n *= counts[d];
  return n;
}

long Grid::flat_index(const VecI& idx) const {
  long flat = 0;
  for (int d = 0; d < dims(); ++d) {
    if (idx[d] < 0 || idx[d] >= counts[d])
      throw std::invalid_argument("Grid: multi-index out of range");
    flat = flat * counts[d] + idx[d];
  }
  return flat;
}

VecI Grid::multi_index(long flat) const {
  if (flat < 0 || flat >= total_cells())
    throw std::invalid_argument("Grid: flat index out of range");
  VecI idx(dims());
  for (int d = dims() - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % counts[d]);
    flat /= counts[d];
  }
  return idx;
}

Vec Grid::center(const VecI& idx) const {
  Vec c(dims());
  for (int d = 0; d < dims(); ++d) c[d] = lower[d] + (idx[d] + 0.5) * pitch[d];
  return c;
}

VecI Grid::nearest_cell(const Vec& x, bool* out_of_domain) const {
  if (x.size() != dims()) throw std::invalid_argument("Grid: point dimension mismatch");
  if (out_of_domain) *out_of_domain = false;
  VecI idx(dims());
  for (int d = 0; d < dims(); ++d) {
    if (periodic[d]) {
      double width = upper[d] - lower[d];
      double t = std::fmod(x[d] - lower[d], width);
      if (t < 0) t += width;
      int i = static_cast<int>(std::floor(t / pitch[d]));
      idx[d] = std::min(i, counts[d] - 1);
    } else {
      if (x[d] < lower[d] || x[d] > upper[d]) {
        if (out_of_domain) *out_of_domain = true;
      }
      int i = static_cast<int>(std::floor((x[d] - lower[d]) / pitch[d]));
      idx[d] = std::clamp(i, 0, counts[d] - 1);
    }
  }
  return idx;
}

long Grid::nearest_flat(const Vec& x, bool* out_of_domain) const {
  return flat_index(nearest_cell(x, out_of_domain));
}

Grid build_grid(Vec lower, Vec upper, VecI counts, std::vector<bool> periodic) {
  if (lower.size() != upper.size() || lower.size() != counts.size() ||
      periodic.size() != static_cast<std::size_t>(counts.size()))
    throw std::invalid_argument("build_grid: mismatched dimensions");
  for (int d = 0; d < counts.size(); ++d) {
    if (counts[d] < 1) throw std::invalid_argument("build_grid: counts must be positive");
    if (!(upper[d] > lower[d]))
      throw std::invalid_argument("build_grid: upper must exceed lower");
  }
  Grid g;
  g.lower = std::move(lower);
  g.upper = std::move(upper);
  g.counts = std::move(counts);
  g.periodic = std::move(periodic);
  g.pitch = (g.upper - g.lower).array() / g.counts.cast<double>().array();
  return g;
}

Grid build_grid(const Environment& env, VecI counts) {
  return build_grid(env.domain_lower(), env.domain_upper(), std::move(counts),
                    env.periodic());
}

double ValueGrid::at(const Vec& x) const { return values[grid.nearest_flat(x)]; }

double ValueGrid::interpolate(const Vec& x) const {
  const int d = grid.dims();
  // Base cell and fractional offset relative to cell centers.
  std::vector<int> base(d);
  std::vector<double> frac(d);
  for (int k = 0; k < d; ++k) {
    double t = (x[k] - grid.lower[k]) / grid.pitch[k] - 0.5;
    if (grid.periodic[k]) {
      double n = grid.counts[k];
      t = std::fmod(t, n);
      if (t < 0) t += n;
      base[k] = static_cast<int>(std::floor(t)) % grid.counts[k];
      frac[k] = t - std::floor(t);
    } else {
      double tc = std::clamp(t, 0.0, static_cast<double>(grid.counts[k] - 1));
      base[k] = std::min(static_cast<int>(std::floor(tc)), grid.counts[k] - 2);
      base[k] = std::max(base[k], 0);
      frac[k] = std::clamp(tc - base[k], 0.0, 1.0);
      if (grid.counts[k] == 1) {
        base[k] = 0;
        frac[k] = 0.0;
      }
    }
  }
  double acc = 0.0;
  VecI idx(d);
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      if (corner & (1 << k)) {
        w *= frac[k];
        idx[k] = base[k] + 1;
        if (grid.periodic[k]) idx[k] %= grid.counts[k];
        else idx[k] = std::min(idx[k], grid.counts[k] - 1);
      } else {
        w *= 1.0 - frac[k];
        idx[k] = base[k];
      }
    }
    if (w != 0.0) acc += w * values[grid.flat_index(idx)];
  }
  return acc;
}

int QTable::greedy_action(long cell) const {
  int best = 0;
  double best_v = q(cell, 0);
  for (int a = 1; a < q.cols(); ++a) {
    if (q(cell, a) < best_v) {
      best_v = q(cell, a);
      best = a;
    }
  }
  return best;
}

MaskArray extract_ra_mask(const ValueGrid& vg) { return vg.values <= 0.0; }

MaskArray extract_ra_mask(const QTable& qt) {
  MaskArray m(qt.q.rows());
  for (long c = 0; c < qt.q.rows(); ++c) m[c] = qt.q.row(c).minCoeff() <= 0.0;
  return m;
}

}  // namespace ra
