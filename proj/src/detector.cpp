#include "betagate/detector.hpp"

namespace betagate {

PreprocessChain::PreprocessChain(const ChannelLayout& layout, const PipelineParams& params)
    : laplacian_(LaplacianFilter::cz(layout)),
      beta_(design_butter_bandpass(params.filter_order, params.beta_band_low_hz,
                                   params.beta_band_high_hz, layout.sample_rate)),
      scratch_(layout.size(), 0.0) {
  const auto broad = design_butter_bandpass(params.filter_order, params.broad_band_low_hz,
                                            params.broad_band_high_hz, layout.sample_rate);
  broad_.assign(layout.size(), BiquadCascade(broad));
}

double PreprocessChain::push(const Frame& frame) {
  for (size_t c = 0; c < broad_.size(); ++c) scratch_[c] = broad_[c].push(frame[c]);
  return beta_.push(laplacian_.apply(scratch_));
}

ControlPipeline::ControlPipeline(const ChannelLayout& layout, const PipelineParams& params,
                                 double start_time)
    : params_(params),
      pre_(layout, params),
      power_(params.cs_window_s, params.cs_hop_s, layout.sample_rate),
      smooth_(params.cs_smoothing),
      first_emit_time_(start_time + params.cs_window_s) {}

std::optional<CsEmission> ControlPipeline::push(const Frame& frame) {
  const double beta = pre_.push(frame);
  auto raw = power_.push(beta);
  if (!raw) return std::nullopt;
  CsEmission e;
  e.index = emitted_;
  e.time = first_emit_time_ + static_cast<double>(emitted_) * params_.cs_hop_s;
  e.value = smooth_.push(*raw);
  ++emitted_;
  return e;
}

ControlSignal control_signal(const MultiChannelRecording& rec, const PipelineParams& params) {
  ControlPipeline pipe(rec.layout, params, rec.start_time);
  ControlSignal cs;
  cs.series.window_len = params.cs_window_s;
  cs.series.hop = params.cs_hop_s;
  cs.series.first_emit_time = rec.start_time + params.cs_window_s;
  for (const auto& f : rec.frames) {
    if (auto e = pipe.push(f)) cs.series.values.push_back(e->value);
  }
  return cs;
}

std::vector<BurstEvent> detect_bursts(const ControlSignal& cs, const Thresholds& th) {
  std::vector<BurstEvent> events;
  for (size_t k = 0; k < cs.series.values.size(); ++k) {
    if (cs.series.values[k] > th.th1) {
      events.push_back({cs.series.emit_time(k), cs.series.values[k], th.th1});
    }
  }
  return events;
}

double lift_output(double cs_value, const Thresholds& th) {
  if (th.th1 <= 0.0) throw ConfigError("lift output needs th1 > 0 to normalize");
  if (cs_value <= th.th1) return 0.0;
  return (cs_value - th.th1) / th.th1;
}

}  // namespace betagate
