#include "treewalk/ensemble.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace treewalk {

SeriesStats aggregate_series(std::span<const std::vector<double>> series) {
  SeriesStats out;
  if (series.empty()) return out;
  const std::size_t len = series.front().size();
  std::vector<RunningStats> acc(len);
  for (const auto& s : series) {
    if (s.size() != len) throw std::invalid_argument("aggregate_series: series lengths differ");
    for (std::size_t i = 0; i < len; ++i) acc[i].add(s[i]);
  }
  out.count = static_cast<std::int64_t>(series.size());
  out.mean.resize(len);
  out.stddev.resize(len);
  out.stderr_of_mean.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.mean[i] = acc[i].mean();
    out.stddev[i] = acc[i].stddev();
    out.stderr_of_mean[i] = acc[i].stderr_of_mean();
  }
  return out;
}

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = default_workers();
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace treewalk
