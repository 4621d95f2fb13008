#pragma once

#include <cstdint>

#include "betagate/types.hpp"

namespace betagate {

struct ThresholdParams {
  double th1_multiplier = 3.0;
  double th2_multiplier = 1.0;
};

// Rest-state statistics of the control signal over the baseline period.
struct BaselineStats {
  double mean = 0.0;  // uV^2
  double std = 0.0;   // population standard deviation, divisor n
  int64_t n_samples = 0;
  double duration = 0.0;  // seconds of baseline signal the stats describe
};

struct Thresholds {
  double th1 = 0.0;  // burst detection bound, mean + 3*std
  double th2 = 0.0;  // readiness bound, mean + 1*std

  // th1 > th2 requires nonzero baseline variance; equality marks a
  // degenerate calibration the experiment must refuse.
  bool degenerate() const { return !(th1 > th2); }
};

// Mean and population std over all control-signal values of the baseline.
// Throws CalibrationError for fewer than 2 values.
BaselineStats compute_baseline(const BandPowerSeries& cs);

Thresholds compute_thresholds(const BaselineStats& stats, const ThresholdParams& params = {});

}  // namespace betagate
