#include "betagate/band_power.hpp"

#include <cmath>
#include <string>

namespace betagate {

namespace {
// Guard against representation error in window/hop * rate products
// (0.1 * 512 = 51.20000000000000284...). Far below one sample, far above
// accumulated double error for any realistic stream length.
constexpr double kTimeEps = 1e-6;
}  // namespace

EmissionSchedule::EmissionSchedule(double window_len_s, double hop_s, double sample_rate)
    : window_len_(window_len_s), hop_(hop_s), rate_(sample_rate) {
  if (!(window_len_s > 0.0) || !(hop_s > 0.0)) {
    throw ConfigError("band-power window and hop must be positive");
  }
  const double ws = window_len_s * sample_rate;
  window_samples_ = std::llround(ws);
  if (window_samples_ < 1 || std::abs(ws - static_cast<double>(window_samples_)) > kTimeEps) {
    throw ConfigError("band-power window of " + std::to_string(window_len_s) +
                      " s is not a whole number of samples at " + std::to_string(sample_rate) +
                      " Hz");
  }
  if (hop_s * sample_rate < 1.0 - kTimeEps) {
    throw ConfigError("band-power hop must span at least one sample");
  }
}

int64_t EmissionSchedule::samples_for(int64_t k) const {
  return static_cast<int64_t>(
      std::ceil(static_cast<double>(window_samples_) + static_cast<double>(k) * hop_ * rate_ -
                kTimeEps));
}

std::pair<int64_t, int64_t> emission_index_range(double first_emit, double hop, double start_s,
                                                 double end_s) {
  const auto lo = static_cast<int64_t>(std::ceil((start_s - first_emit) / hop - kTimeEps));
  const auto hi = static_cast<int64_t>(std::ceil((end_s - first_emit) / hop - kTimeEps));
  return {std::max<int64_t>(lo, 0), std::max<int64_t>(hi, 0)};
}

StreamingBandPower::StreamingBandPower(double window_len_s, double hop_s, double sample_rate)
    : schedule_(window_len_s, hop_s, sample_rate),
      ring_(static_cast<size_t>(schedule_.window_samples()), 0.0),
      next_due_(schedule_.samples_for(0)) {}

std::optional<double> StreamingBandPower::push(double x) {
  ring_[static_cast<size_t>(consumed_ % schedule_.window_samples())] = x * x;
  ++consumed_;
  if (consumed_ < next_due_) return std::nullopt;
  // Sum in time order so the streaming value is bit-identical to a batch
  // recomputation over the same window.
  const int64_t w = schedule_.window_samples();
  const int64_t start = consumed_ - w;
  double sum = 0.0;
  for (int64_t i = start; i < consumed_; ++i) sum += ring_[static_cast<size_t>(i % w)];
  ++next_emission_;
  next_due_ = schedule_.samples_for(next_emission_);
  return sum / static_cast<double>(w);
}

MovingAverage::MovingAverage(int n) {
  if (n < 1) throw ConfigError("moving average length must be >= 1");
  ring_.assign(static_cast<size_t>(n), 0.0);
}

double MovingAverage::push(double x) {
  const auto n = static_cast<int64_t>(ring_.size());
  ring_[static_cast<size_t>(count_ % n)] = x;
  ++count_;
  const int64_t have = std::min(count_, n);
  const int64_t start = count_ - have;
  double sum = 0.0;
  for (int64_t i = start; i < count_; ++i) sum += ring_[static_cast<size_t>(i % n)];
  return sum / static_cast<double>(have);
}

void MovingAverage::reset() {
  count_ = 0;
  std::fill(ring_.begin(), ring_.end(), 0.0);
}

BandPowerSeries band_power(const ScalarStream& stream, double window_len_s, double hop_s) {
  StreamingBandPower bp(window_len_s, hop_s, stream.sample_rate);
  BandPowerSeries out;
  out.window_len = window_len_s;
  out.hop = hop_s;
  out.first_emit_time = stream.start_time + window_len_s;
  for (double v : stream.values) {
    if (auto e = bp.push(v)) out.values.push_back(*e);
  }
  return out;
}

BandPowerSeries moving_average(const BandPowerSeries& series, int n) {
  MovingAverage ma(n);
  BandPowerSeries out = series;
  for (size_t i = 0; i < series.values.size(); ++i) out.values[i] = ma.push(series.values[i]);
  return out;
}

}  // namespace betagate
