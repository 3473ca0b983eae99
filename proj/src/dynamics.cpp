#include "treewalk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "treewalk/hamiltonian.hpp"

namespace treewalk {

double hitting_time(int d, double gamma) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  return (2.0 * d + 1.0 + 1.0188 * std::cbrt(d + 0.5)) / (2.0 * std::numbers::sqrt2 * gamma);
}

double hit_decay_prediction(int d, double width, double clean_peak) {
  if (width < 0.0) throw std::domain_error("disorder width must be >= 0");
  return clean_peak * std::exp(-(d - 0.5) * width * width / 16.0);
}

std::vector<double> uniform_grid(double end, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_grid: need at least one point");
  std::vector<double> t(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) t[i] = end * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

std::vector<double> default_time_grid(int d, double gamma) { return uniform_grid(3.0 * hitting_time(d, gamma), 300); }

namespace {

struct Observer {
  const Graph& g;
  WalkSeries& out;

  void operator()(std::size_t i, const Eigen::VectorXcd& psi) const {
    double pcol = 0.0, depth = 0.0;
    for (int j = 0; j < g.columns(); ++j) {
      const std::int64_t begin = g.column_offset(j), size = g.column_size(j);
      cdouble overlap = 0.0;
      double weight = 0.0;
      for (std::int64_t v = begin; v < begin + size; ++v) {
        overlap += psi[v];
        weight += std::norm(psi[v]);
      }
      pcol += std::norm(overlap) / static_cast<double>(size);
      depth += j * weight;
    }
    out.p_hit[i] = std::norm(psi[g.right_root()]);
    out.p_col[i] = pcol;
    out.depth[i] = depth;
  }
};

WalkSeries make_series(std::span<const double> times) {
  WalkSeries s;
  s.times.assign(times.begin(), times.end());
  s.p_hit.resize(times.size());
  s.p_col.resize(times.size());
  s.depth.resize(times.size());
  return s;
}

}  // namespace

WalkSeries walk_series(const Graph& g, std::span<const double> eps, std::span<const double> times, int j0,
                       double gamma, const PropagateOptions& opt) {
  const auto start = column_state(g, j0);
  const Hamiltonian h = eps.empty() ? assemble_h0(g, gamma) : assemble_h(g, gamma, eps);
  Eigen::VectorXcd psi0 = Eigen::Map<const Eigen::VectorXd>(start.data(), g.size()).cast<cdouble>();
  WalkSeries out = make_series(times);
  propagate_series(h, psi0, times, Observer{g, out}, opt);
  return out;
}

WalkSeries column_walk_series(int d, Variant variant, std::span<const double> times, int j0, double gamma) {
  const Eigen::MatrixXd hc = column_hamiltonian(d, variant, gamma);
  const int cols = static_cast<int>(hc.rows());
  if (j0 < 0 || j0 >= cols) throw std::domain_error("column index out of range");
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(cols);
  psi0[j0] = 1.0;
  WalkSeries out = make_series(times);
  propagate_series(hc, psi0, times, [&](std::size_t i, const Eigen::VectorXcd& psi) {
    double depth = 0.0;
    for (int j = 0; j < cols; ++j) depth += j * std::norm(psi[j]);
    out.p_hit[i] = std::norm(psi[cols - 1]);
    out.p_col[i] = psi.squaredNorm();
    out.depth[i] = depth;
  });
  return out;
}

std::vector<double> p_hit_series(const Graph& g, std::span<const double> eps, std::span<const double> times,
                                 const PropagateOptions& opt) {
  if (g.variant() != Variant::SGT) throw std::domain_error("p_hit_series: defined for the SGT only");
  return walk_series(g, eps, times, 0, 1.0, opt).p_hit;
}

std::vector<double> p_col_series(const Graph& g, std::span<const double> eps, std::span<const double> times,
                                 int j0, const PropagateOptions& opt) {
  return walk_series(g, eps, times, j0, 1.0, opt).p_col;
}

std::vector<double> avg_depth_series(const Graph& g, std::span<const double> eps, std::span<const double> times,
                                     const PropagateOptions& opt) {
  return walk_series(g, eps, times, 0, 1.0, opt).depth;
}

WalkEnsemble walk_ensemble(const WalkEnsembleOptions& opt) {
  if (opt.realizations < 1) throw std::invalid_argument("walk_ensemble: need at least one realization");
  WalkEnsemble out;
  out.times = opt.times.empty() ? default_time_grid(opt.depth, opt.gamma) : opt.times;
  out.samples.resize(static_cast<std::size_t>(opt.realizations));
  parallel_for(out.samples.size(), opt.workers, [&](std::size_t r) {
    const Graph g = realization_graph(opt.depth, opt.variant, opt.seed, r);
    const auto eps = sample_disorder({opt.width, opt.seed, r, g.size()});
    out.samples[r] = walk_series(g, eps, out.times, opt.start_column, opt.gamma, opt.propagation);
  });
  std::vector<std::vector<double>> hit, col, depth;
  for (const auto& s : out.samples) {
    hit.push_back(s.p_hit);
    col.push_back(s.p_col);
    depth.push_back(s.depth);
  }
  out.p_hit = aggregate_series(hit);
  out.p_col = aggregate_series(col);
  out.depth = aggregate_series(depth);
  return out;
}

std::pair<double, double> clean_hit_peak(int d, double gamma) {
  const double th = hitting_time(d, gamma);
  auto p_at = [&](double t) {
    const double ts[] = {t};
    return column_walk_series(d, Variant::SGT, ts, 0, gamma).p_hit[0];
  };
  const auto grid = uniform_grid(1.5 * th, 1501);
  std::size_t best = 0;
  double best_p = -1.0;
  {
    const WalkSeries s = column_walk_series(d, Variant::SGT, grid, 0, gamma);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= 0.5 * th && s.p_hit[i] > best_p) {
        best_p = s.p_hit[i];
        best = i;
      }
  }
  double lo = grid[std::max<std::size_t>(best, 1) - 1], hi = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = p_at(a), fb = p_at(b);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = p_at(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = p_at(b);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, p_at(t)};
}

std::vector<MaxDepthRow> max_depth_sweep(const MaxDepthOptions& opt) {
  if (opt.depths.empty() || opt.widths.empty()) throw std::invalid_argument("max_depth_sweep: empty grid");
  if (opt.realizations.size() != opt.depths.size())
    throw std::invalid_argument("max_depth_sweep: need one realization count per depth");
  struct Task {
    std::size_t di, wi, r;
  };
  std::vector<Task> tasks;
  for (std::size_t di = 0; di < opt.depths.size(); ++di)
    for (std::size_t wi = 0; wi < opt.widths.size(); ++wi)
      for (int r = 0; r < opt.realizations[di]; ++r) tasks.push_back({di, wi, static_cast<std::size_t>(r)});
  std::vector<double> value(tasks.size());
  parallel_for(tasks.size(), opt.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    const int d = opt.depths[t.di];
    // t < 3 t_hit: drop the closing point of the inclusive grid
    auto times = uniform_grid(3.0 * hitting_time(d), opt.time_points + 1);
    times.pop_back();
    const Graph g = build_sgt(d);
    const auto eps = sample_disorder({opt.widths[t.wi], opt.seed, t.r, g.size()});
    const auto depth = walk_series(g, eps, times, 0, 1.0, opt.propagation).depth;
    value[i] = *std::max_element(depth.begin(), depth.end());
  });
  std::vector<MaxDepthRow> rows;
  std::size_t i = 0;
  for (std::size_t di = 0; di < opt.depths.size(); ++di)
    for (std::size_t wi = 0; wi < opt.widths.size(); ++wi) {
      RunningStats acc;
      for (int r = 0; r < opt.realizations[di]; ++r) acc.add(value[i++]);
      rows.push_back({opt.depths[di], opt.widths[wi], acc.mean(), acc.stddev(), acc.stderr_of_mean(), acc.n});
    }
  return rows;
}

}  // namespace treewalk
