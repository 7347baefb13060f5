#pragma once

#include <cstddef>
#include <functional>

namespace layergreen {

/// Worker count from LAYERGREEN_THREADS, else the hardware concurrency (>= 1).
int worker_count();

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = worker_count()).
/// Indices are dealt in contiguous blocks; the first exception by index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace layergreen
