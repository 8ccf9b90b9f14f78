#pragma once

#include <cmath>
#include <cstdint>

namespace qfs {

/// Streaming mean and variance (Welford update).
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  double sample_variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  double sample_std() const { return std::sqrt(sample_variance()); }
};

}  // namespace qfs
