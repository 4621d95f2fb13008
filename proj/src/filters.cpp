#include "betagate/filters.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace betagate {

namespace {

void check_band(double low_hz, double high_hz, double sample_rate, int order) {
  if (order < 1) throw ConfigError("filter order must be >= 1");
  if (!(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < sample_rate / 2.0)) {
    throw ConfigError("invalid band edges [" + std::to_string(low_hz) + ", " +
                      std::to_string(high_hz) + "] Hz at " + std::to_string(sample_rate) +
                      " Hz (need 0 < low < high < rate/2)");
  }
}

}  // namespace

std::vector<Biquad> design_butter_bandpass(int order, double low_hz, double high_hz,
                                           double sample_rate) {
  using cplx = std::complex<double>;
  check_band(low_hz, high_hz, sample_rate, order);

  const double pi = std::numbers::pi;
  const double fs2 = 2.0 * sample_rate;
  // bilinear prewarp of the band edges
  const double w1 = fs2 * std::tan(pi * low_hz / sample_rate);
  const double w2 = fs2 * std::tan(pi * high_hz / sample_rate);
  const double w0 = std::sqrt(w1 * w2);
  const double bw = w2 - w1;

  // Each analog prototype pole maps to one z-domain conjugate pair, hence one
  // section. Prototype poles come in conjugate pairs themselves (plus the real
  // pole for odd orders), so iterating the upper half plane plus the real axis
  // covers every section exactly once.
  std::vector<Biquad> sections;
  sections.reserve(static_cast<size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double theta = pi * (2.0 * k + order + 1.0) / (2.0 * order);
    const cplx proto = std::exp(cplx(0.0, theta));
    if (proto.imag() < -1e-12) continue;  // conjugate handled with its partner

    const cplx t = 0.5 * bw * proto;
    const cplx r = std::sqrt(t * t - w0 * w0);
    for (const cplx s_pole : {t + r, t - r}) {
      const cplx zp = (fs2 + s_pole) / (fs2 - s_pole);
      Biquad q;
      q.b0 = 1.0;
      q.b1 = 0.0;
      q.b2 = -1.0;  // one zero at z=1, one at z=-1 per section
      q.a1 = -2.0 * zp.real();
      q.a2 = std::norm(zp);
      sections.push_back(q);
    }
    if (proto.imag() < 1e-12) {
      // real prototype pole (odd order): its two band-pass poles already form
      // the conjugate pair, so the second section of this iteration is the
      // mirror of the first; drop it.
      sections.pop_back();
    }
  }

  // normalize to unit gain at the warped center frequency, spread evenly
  const double wc = 2.0 * std::atan(w0 / fs2);
  const cplx z = std::exp(cplx(0.0, -wc));
  cplx h(1.0, 0.0);
  for (const auto& q : sections) {
    h *= (q.b0 + q.b1 * z + q.b2 * z * z) / (1.0 + q.a1 * z + q.a2 * z * z);
  }
  const double g = std::pow(1.0 / std::abs(h), 1.0 / static_cast<double>(sections.size()));
  for (auto& q : sections) {
    q.b0 *= g;
    q.b1 *= g;
    q.b2 *= g;
  }
  return sections;
}

double cascade_gain_at(const std::vector<Biquad>& sections, double freq_hz, double sample_rate) {
  using cplx = std::complex<double>;
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  const cplx z = std::exp(cplx(0.0, -w));
  cplx h(1.0, 0.0);
  for (const auto& q : sections) {
    h *= (q.b0 + q.b1 * z + q.b2 * z * z) / (1.0 + q.a1 * z + q.a2 * z * z);
  }
  return std::abs(h);
}

BiquadCascade::BiquadCascade(std::vector<Biquad> sections)
    : sections_(std::move(sections)),
      z1_(sections_.size(), 0.0),
      z2_(sections_.size(), 0.0) {}

double BiquadCascade::push(double x) {
  for (size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& q = sections_[i];
    const double y = q.b0 * x + z1_[i];
    z1_[i] = q.b1 * x - q.a1 * y + z2_[i];
    z2_[i] = q.b2 * x - q.a2 * y;
    x = y;
  }
  return x;
}

void BiquadCascade::reset() {
  std::fill(z1_.begin(), z1_.end(), 0.0);
  std::fill(z2_.begin(), z2_.end(), 0.0);
}

ScalarStream bandpass(const ScalarStream& stream, double low_hz, double high_hz, int order) {
  check_band(low_hz, high_hz, stream.sample_rate, order);
  ScalarStream out{{}, stream.sample_rate, stream.start_time};
  if (stream.values.empty()) return out;
  BiquadCascade f(design_butter_bandpass(order, low_hz, high_hz, stream.sample_rate));
  out.values.reserve(stream.values.size());
  for (double v : stream.values) out.values.push_back(f.push(v));
  return out;
}

MultiChannelRecording bandpass(const MultiChannelRecording& rec, double low_hz, double high_hz,
                               int order) {
  check_band(low_hz, high_hz, rec.layout.sample_rate, order);
  MultiChannelRecording out{rec.layout, {}, rec.start_time};
  if (rec.frames.empty()) return out;
  std::vector<BiquadCascade> filt;
  filt.reserve(rec.layout.size());
  for (size_t c = 0; c < rec.layout.size(); ++c) {
    filt.emplace_back(design_butter_bandpass(order, low_hz, high_hz, rec.layout.sample_rate));
  }
  out.frames.resize(rec.frames.size());
  for (size_t i = 0; i < rec.frames.size(); ++i) {
    Frame f(rec.layout.size());
    for (size_t c = 0; c < rec.layout.size(); ++c) f[c] = filt[c].push(rec.frames[i][c]);
    out.frames[i] = std::move(f);
  }
  return out;
}

}  // namespace betagate
