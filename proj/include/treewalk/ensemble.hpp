#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace treewalk {

/// Count / sum / sum-of-squares accumulator. Merging is commutative; callers
/// that need bit-identical output feed values in a fixed order.
struct RunningStats {
  std::int64_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  void merge(const RunningStats& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return n > 0 ? sum / static_cast<double>(n) : std::nan(""); }
  /// Sample standard deviation (n - 1 denominator); 0 for a single sample.
  double stddev() const {
    if (n < 2) return n == 1 ? 0.0 : std::nan("");
    const double m = mean();
    const double var = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
  double stderr_of_mean() const { return n > 0 ? stddev() / std::sqrt(static_cast<double>(n)) : std::nan(""); }
};

/// Per-time ensemble statistics for a family of equal-length series.
struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> stderr_of_mean;
  std::int64_t count = 0;
};

/// Reduces per-realization series in index order.
SeriesStats aggregate_series(std::span<const std::vector<double>> series);

/// Worker count used when a caller passes 0.
unsigned default_workers();

/// Runs task(i) for i in [0, count) on `workers` threads. Tasks must write
/// only to their own slot of a preallocated result; the first exception
/// thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

}  // namespace treewalk
