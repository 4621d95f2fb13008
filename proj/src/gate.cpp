#include "betagate/gate.hpp"

#include <cmath>

namespace betagate {

InhibitorSignal inhibitor_signal(const MultiChannelRecording& rec, const PipelineParams& pipeline,
                                 const InhibitorParams& params) {
  PreprocessChain pre(rec.layout, pipeline);
  ScalarStream beta{{}, rec.layout.sample_rate, rec.start_time};
  beta.values.reserve(rec.frames.size());
  for (const auto& f : rec.frames) beta.values.push_back(pre.push(f));
  InhibitorSignal is;
  is.series = band_power(beta, params.is_window_s, params.is_hop_s);
  return is;
}

double readiness_fraction(std::span<const double> window_power, double th2) {
  if (window_power.empty()) return 0.0;
  size_t below = 0;
  for (double p : window_power) {
    if (p < th2) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(window_power.size());
}

std::string to_string(GateDecision::Reason r) {
  return r == GateDecision::Reason::readiness_met ? "readiness_met" : "timeout";
}

namespace {

int64_t whole_samples(double seconds, double rate, const char* what) {
  const double s = seconds * rate;
  const auto n = std::llround(s);
  if (n < 1 || std::abs(s - static_cast<double>(n)) > 1e-6) {
    throw ConfigError(std::string(what) + " must be a whole number of samples");
  }
  return n;
}

}  // namespace

InhibitorGate::InhibitorGate(const Thresholds& th, const InhibitorParams& params,
                             double sample_rate)
    : params_(params), th2_(th.th2), rate_(sample_rate) {
  if (th.degenerate()) {
    throw ConfigError("gate thresholds are degenerate (th1 <= th2); recalibrate");
  }
  if (!(params.min_inhibition_s > 0.0) || !(params.max_inhibition_s >= params.min_inhibition_s)) {
    throw ConfigError("gate bounds must satisfy 0 < min <= max");
  }
  window_samples_ = whole_samples(params.is_window_s, rate_, "inhibitor window");
  hop_samples_ = whole_samples(params.is_hop_s, rate_, "inhibitor hop");
  max_samples_ = whole_samples(params.max_inhibition_s, rate_, "max inhibition");
  min_samples_ = whole_samples(params.min_inhibition_s, rate_, "min inhibition");
  ring_.assign(static_cast<size_t>(window_samples_), 0.0);
}

void InhibitorGate::arm() {
  armed_ = true;
  onset_seen_ = seen_;
  below_since_onset_ = 0;
  checks_.clear();
}

double InhibitorGate::fraction_below() const {
  if (params_.scope == ReadinessScope::whole_phase) {
    const int64_t n = seen_ - onset_seen_;
    return n == 0 ? 0.0 : static_cast<double>(below_since_onset_) / static_cast<double>(n);
  }
  int64_t below = 0;
  for (double p : ring_) {
    if (p < th2_) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(window_samples_);
}

std::optional<GateDecision> InhibitorGate::feed(double power) {
  ring_[static_cast<size_t>(seen_ % window_samples_)] = power;
  ++seen_;
  if (!armed_) return std::nullopt;
  if (power < th2_) ++below_since_onset_;

  const int64_t since_onset = seen_ - onset_seen_;
  if (since_onset % hop_samples_ == 0) {
    const bool window_full =
        params_.scope == ReadinessScope::whole_phase || seen_ >= window_samples_;
    if (window_full) {
      GateCheck check;
      check.elapsed_s = static_cast<double>(since_onset) / rate_;
      check.fraction_below = fraction_below();
      check.ready = check.fraction_below >= params_.readiness_fraction;
      checks_.push_back(check);
      if (since_onset >= min_samples_ && check.ready) {
        armed_ = false;
        return GateDecision{check.elapsed_s, GateDecision::Reason::readiness_met,
                            static_cast<int>(checks_.size())};
      }
    }
  }
  if (since_onset >= max_samples_) {
    armed_ = false;
    return GateDecision{params_.max_inhibition_s, GateDecision::Reason::timeout,
                        static_cast<int>(checks_.size())};
  }
  return std::nullopt;
}

GateDecision run_gate(std::span<const double> power_trace, size_t onset_index,
                      const Thresholds& th, const InhibitorParams& params, double sample_rate,
                      std::vector<GateCheck>* checks_out) {
  InhibitorGate gate(th, params, sample_rate);
  std::optional<GateDecision> decision;
  for (size_t i = 0; i < power_trace.size() && !decision; ++i) {
    if (i == onset_index) gate.arm();
    decision = gate.feed(power_trace[i]);
  }
  if (checks_out) *checks_out = gate.checks();
  if (!decision) {
    throw EngineError("power trace ended before the gate could decide");
  }
  return *decision;
}

}  // namespace betagate
