#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treewalk/ensemble.hpp"
#include "treewalk/graph.hpp"
#include "treewalk/numerics.hpp"

namespace treewalk {

/// Observables of one walk on a time grid.
///   p_hit: |<col last|psi(t)>|^2 (far root)
///   p_col: sum_j |<col j|psi(t)>|^2
///   depth: <psi(t)| r |psi(t)>, r = sum_j j * (projector on column j)
struct WalkSeries {
  std::vector<double> times;
  std::vector<double> p_hit;
  std::vector<double> p_col;
  std::vector<double> depth;
};

/// t_hit ~ (2d + 1 + 1.0188 (d + 1/2)^(1/3)) / (2 sqrt2 gamma).
double hitting_time(int d, double gamma = 1.0);

/// p_d exp(-(d - 1/2) W^2 / 16).
double hit_decay_prediction(int d, double width, double clean_peak);

/// n uniform points on [0, end] (inclusive).
std::vector<double> uniform_grid(double end, std::size_t n);

/// Default dynamics grid: 300 points on [0, 3 t_hit].
std::vector<double> default_time_grid(int d, double gamma = 1.0);

/// Full-space evolution from |col j0>.
WalkSeries walk_series(const Graph& g, std::span<const double> eps, std::span<const double> times, int j0 = 0,
                       double gamma = 1.0, const PropagateOptions& opt = {});

/// Column-space evolution of the clean walk from |col j0>.
WalkSeries column_walk_series(int d, Variant variant, std::span<const double> times, int j0 = 0,
                              double gamma = 1.0);

/// p_hit alone, starting at the left root. SGT only.
std::vector<double> p_hit_series(const Graph& g, std::span<const double> eps, std::span<const double> times,
                                 const PropagateOptions& opt = {});
std::vector<double> p_col_series(const Graph& g, std::span<const double> eps, std::span<const double> times,
                                 int j0, const PropagateOptions& opt = {});
std::vector<double> avg_depth_series(const Graph& g, std::span<const double> eps, std::span<const double> times,
                                     const PropagateOptions& opt = {});

struct WalkEnsembleOptions {
  int depth = 10;
  Variant variant = Variant::SGT;
  double width = 0.0;
  int realizations = 10;
  std::uint64_t seed = 0;
  std::vector<double> times;  // empty: default grid
  int start_column = 0;
  double gamma = 1.0;
  unsigned workers = 0;
  PropagateOptions propagation{};
};

struct WalkEnsemble {
  std::vector<double> times;
  SeriesStats p_hit;
  SeriesStats p_col;
  SeriesStats depth;
  /// Per-realization series, in realization order.
  std::vector<WalkSeries> samples;
};

WalkEnsemble walk_ensemble(const WalkEnsembleOptions& opt);

/// Measured clean peak: max over a fine grid around t_hit, refined by
/// golden-section search. Returns {time, probability}.
std::pair<double, double> clean_hit_peak(int d, double gamma = 1.0);

struct MaxDepthRow {
  int depth;
  double width;
  double mean;
  double stddev;
  double stderr_of_mean;
  std::int64_t realizations;
};

struct MaxDepthOptions {
  std::vector<int> depths;
  std::vector<double> widths;
  std::vector<int> realizations;  // one per depth
  std::uint64_t seed = 0;
  std::size_t time_points = 300;
  unsigned workers = 0;
  PropagateOptions propagation{};
};

/// Ensemble mean of max_{t < 3 t_hit} r(t) on the SGT.
std::vector<MaxDepthRow> max_depth_sweep(const MaxDepthOptions& opt);

}  // namespace treewalk
