#pragma once

#include <span>
#include <vector>

#include "betagate/types.hpp"

namespace betagate {

// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Butterworth band-pass via the analog prototype -> lp2bp -> bilinear chain,
// returned as conjugate-pair second-order sections with the pass-band gain
// normalized to 1 at the (warped) center frequency. `order` is the prototype
// order: the band-pass has 2*order poles and `order` sections.
std::vector<Biquad> design_butter_bandpass(int order, double low_hz, double high_hz,
                                           double sample_rate);

// |H(e^{j 2 pi f / fs})| of a section cascade.
double cascade_gain_at(const std::vector<Biquad>& sections, double freq_hz, double sample_rate);

// Causal streaming cascade, direct form II transposed, state starts at rest.
class BiquadCascade {
 public:
  BiquadCascade() = default;
  explicit BiquadCascade(std::vector<Biquad> sections);

  double push(double x);
  void reset();
  const std::vector<Biquad>& sections() const { return sections_; }

 private:
  std::vector<Biquad> sections_;
  std::vector<double> z1_, z2_;
};

// Single-pass causal band-pass over a whole stream. Empty input gives empty
// output. Band edges must satisfy 0 < low < high < rate/2.
ScalarStream bandpass(const ScalarStream& stream, double low_hz, double high_hz, int order = 4);

// Per-channel variant; every channel gets its own filter state.
MultiChannelRecording bandpass(const MultiChannelRecording& rec, double low_hz, double high_hz,
                               int order = 4);

}  // namespace betagate
