#include "betagate/calibration.hpp"

#include <cmath>

namespace betagate {

BaselineStats compute_baseline(const BandPowerSeries& cs) {
  const auto n = static_cast<int64_t>(cs.values.size());
  if (n < 2) {
    throw CalibrationError("baseline needs at least 2 control-signal values, got " +
                           std::to_string(n));
  }
  // Welford, numerically stable in one pass.
  double mean = 0.0;
  double m2 = 0.0;
  int64_t count = 0;
  for (double v : cs.values) {
    ++count;
    const double d = v - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (v - mean);
  }
  BaselineStats stats;
  stats.mean = mean;
  stats.std = std::sqrt(m2 / static_cast<double>(count));
  stats.n_samples = n;
  stats.duration = cs.window_len + static_cast<double>(n - 1) * cs.hop;
  return stats;
}

Thresholds compute_thresholds(const BaselineStats& stats, const ThresholdParams& params) {
  Thresholds th;
  th.th1 = stats.mean + params.th1_multiplier * stats.std;
  th.th2 = stats.mean + params.th2_multiplier * stats.std;
  return th;
}

}  // namespace betagate
