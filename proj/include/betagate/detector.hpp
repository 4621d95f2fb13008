#pragma once

#include <optional>

#include "betagate/band_power.hpp"
#include "betagate/calibration.hpp"
#include "betagate/filters.hpp"
#include "betagate/spatial.hpp"
#include "betagate/types.hpp"

namespace betagate {

struct PipelineParams {
  double broad_band_low_hz = 2.0;
  double broad_band_high_hz = 40.0;
  double beta_band_low_hz = 16.0;
  double beta_band_high_hz = 24.0;
  int filter_order = 4;
  double cs_window_s = 1.0;
  double cs_hop_s = 0.1;
  int cs_smoothing = 4;
};

// Shared front end of both the control and inhibitor signals:
// broad-band filter per channel -> Cz Laplacian -> beta-band filter.
// One instance per logical producer; state is carried across pushes.
class PreprocessChain {
 public:
  PreprocessChain(const ChannelLayout& layout, const PipelineParams& params);

  // One frame in, one beta-band sample out.
  double push(const Frame& frame);

 private:
  std::vector<BiquadCascade> broad_;
  LaplacianFilter laplacian_;
  BiquadCascade beta_;
  Frame scratch_;
};

struct CsEmission {
  int64_t index = 0;
  double time = 0.0;  // window end, seconds from stream start
  double value = 0.0;
};

// Streaming control signal: beta band power on a 1 s window every 100 ms,
// smoothed with a 4-point trailing average.
class ControlPipeline {
 public:
  ControlPipeline(const ChannelLayout& layout, const PipelineParams& params,
                  double start_time = 0.0);

  std::optional<CsEmission> push(const Frame& frame);

  double first_emit_time() const { return first_emit_time_; }
  double hop() const { return params_.cs_hop_s; }

 private:
  PipelineParams params_;
  PreprocessChain pre_;
  StreamingBandPower power_;
  MovingAverage smooth_;
  double first_emit_time_;
  int64_t emitted_ = 0;
};

struct ControlSignal {
  BandPowerSeries series;
};

// Whole-recording control signal, identical sample-for-sample to streaming
// the recording through a ControlPipeline.
ControlSignal control_signal(const MultiChannelRecording& rec, const PipelineParams& params = {});

struct BurstEvent {
  double time = 0.0;
  double cs_value = 0.0;
  double th1 = 0.0;
};

// One event per control-signal emission strictly above th1, in time order.
std::vector<BurstEvent> detect_bursts(const ControlSignal& cs, const Thresholds& th);

// Dimensionless feedback: 0 at or below th1, (cs - th1)/th1 above.
double lift_output(double cs_value, const Thresholds& th);

}  // namespace betagate
