#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "betagate/types.hpp"

namespace betagate {

// Emission schedule for trailing windows: emission k fires once
// ceil((window_len + k*hop) * rate) samples have been consumed, and is
// stamped window_len + k*hop seconds after stream start. window_len*rate must
// be an integer number of samples; the hop may be fractional in samples
// (100 ms at 512 Hz is 51.2 samples), in which case the window contents are
// quantized to the latest available sample.
class EmissionSchedule {
 public:
  EmissionSchedule(double window_len_s, double hop_s, double sample_rate);

  // Number of samples that must have been consumed for emission k.
  int64_t samples_for(int64_t k) const;
  int64_t window_samples() const { return window_samples_; }
  double window_len() const { return window_len_; }
  double hop() const { return hop_; }

 private:
  double window_len_, hop_, rate_;
  int64_t window_samples_;
};

// Range [k_lo, k_hi) of emission indices whose stamp falls in
// [start_s, end_s), for a series starting at first_emit with the given hop.
std::pair<int64_t, int64_t> emission_index_range(double first_emit, double hop, double start_s,
                                                 double end_s);

// Trailing-window mean of squared samples, one value per hop.
class StreamingBandPower {
 public:
  StreamingBandPower(double window_len_s, double hop_s, double sample_rate);

  // Returns the band-power value if consuming this sample completes a hop.
  std::optional<double> push(double x);

  int64_t emissions() const { return next_emission_; }
  const EmissionSchedule& schedule() const { return schedule_; }

 private:
  EmissionSchedule schedule_;
  std::vector<double> ring_;  // squared samples, capacity = window
  int64_t consumed_ = 0;
  int64_t next_emission_ = 0;
  int64_t next_due_;
};

// Warm-up-tolerant trailing mean over the last n values.
class MovingAverage {
 public:
  explicit MovingAverage(int n);
  double push(double x);
  void reset();

 private:
  std::vector<double> ring_;
  int64_t count_ = 0;
};

// Batch form: mean of squared samples over each trailing window, emitted
// every hop once a full window exists. A stream shorter than one window
// yields an empty series.
BandPowerSeries band_power(const ScalarStream& stream, double window_len_s, double hop_s);

// Trailing n-point average; early values average over what exists. Timing
// metadata is unchanged.
BandPowerSeries moving_average(const BandPowerSeries& series, int n);

}  // namespace betagate
