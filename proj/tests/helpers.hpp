#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "betagate/rng.hpp"
#include "betagate/types.hpp"

namespace betagate::testing {

inline ScalarStream sine_stream(double freq_hz, double duration_s, double rate = 512.0,
                                double amplitude = 1.0, double phase = 0.0) {
  ScalarStream s{{}, rate, 0.0};
  const auto n = static_cast<size_t>(std::llround(duration_s * rate));
  s.values.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    s.values.push_back(amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * t + phase));
  }
  return s;
}

inline MultiChannelRecording zero_recording(double duration_s,
                                            ChannelLayout layout = ChannelLayout::standard()) {
  MultiChannelRecording rec{layout, {}, 0.0};
  const auto n = static_cast<size_t>(std::llround(duration_s * layout.sample_rate));
  rec.frames.assign(n, Frame(layout.size(), 0.0));
  return rec;
}

// Identical waveform on every channel; the Laplacian must null it.
inline MultiChannelRecording common_mode_recording(double duration_s, uint64_t seed = 99,
                                                   double amplitude = 10.0) {
  MultiChannelRecording rec = zero_recording(duration_s);
  Rng rng(seed);
  for (auto& f : rec.frames) {
    const double v = amplitude * rng.gauss();
    for (auto& c : f) c = v;
  }
  return rec;
}

// Steady-state amplitude of a filtered sine: peak of the trailing fifth.
inline double steady_state_peak(const std::vector<double>& y) {
  double peak = 0.0;
  for (size_t i = y.size() * 4 / 5; i < y.size(); ++i) peak = std::max(peak, std::abs(y[i]));
  return peak;
}

}  // namespace betagate::testing
