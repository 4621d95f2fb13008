#pragma once

#include <optional>
#include <span>

#include "betagate/detector.hpp"

namespace betagate {

enum class ReadinessScope {
  trailing_window,  // fraction over the current 2 s window (default)
  whole_phase,      // fraction over everything since Ready onset
};

struct InhibitorParams {
  double is_window_s = 2.0;
  double is_hop_s = 0.5;
  double min_inhibition_s = 0.5;
  double max_inhibition_s = 10.0;
  double readiness_fraction = 0.99;
  ReadinessScope scope = ReadinessScope::trailing_window;
};

struct InhibitorSignal {
  BandPowerSeries series;  // 2 s window, 500 ms hop, no smoothing
};

// Same preprocessing as the control signal, band power on the inhibitor
// window, no moving average.
InhibitorSignal inhibitor_signal(const MultiChannelRecording& rec, const PipelineParams& pipeline = {},
                                 const InhibitorParams& params = {});

// Fraction of instantaneous-power samples strictly below th2. Readiness
// holds when the fraction reaches the configured bound (0.99 canonically).
double readiness_fraction(std::span<const double> window_power, double th2);

struct GateCheck {
  double elapsed_s = 0.0;  // since Ready onset
  double fraction_below = 0.0;
  bool ready = false;
};

struct GateDecision {
  enum class Reason { readiness_met, timeout };
  double released_at = 0.0;  // seconds since Ready onset
  Reason reason = Reason::readiness_met;
  int checks_evaluated = 0;
};

std::string to_string(GateDecision::Reason r);

// Release controller for one standby period. Feed the squared beta-band
// samples continuously (history before arming fills the window, which is how
// a release at the 0.5 s minimum is reachable with a 2 s window); arm() marks
// Ready onset. Checks run at every hop from onset; release happens at the
// first hop at or past the minimum with readiness met, or at exactly the
// maximum with reason timeout.
class InhibitorGate {
 public:
  InhibitorGate(const Thresholds& th, const InhibitorParams& params, double sample_rate);

  void arm();
  bool armed() const { return armed_; }

  // Feed one instantaneous-power sample (squared beta-band sample).
  // While armed, returns the decision at the sample that settles it.
  std::optional<GateDecision> feed(double power);

  const std::vector<GateCheck>& checks() const { return checks_; }

 private:
  double fraction_below() const;

  InhibitorParams params_;
  double th2_;
  double rate_;
  int64_t window_samples_;
  int64_t hop_samples_;
  int64_t max_samples_;
  int64_t min_samples_;

  std::vector<double> ring_;
  int64_t seen_ = 0;  // total samples ever fed
  bool armed_ = false;
  int64_t onset_seen_ = 0;         // value of seen_ at arm()
  int64_t below_since_onset_ = 0;  // whole-phase scope bookkeeping
  std::vector<GateCheck> checks_;
};

// Run a gate over a prepared instantaneous-power trace: samples before
// onset_index are history, the rest is the standby period. Throws
// ConfigError on degenerate thresholds.
GateDecision run_gate(std::span<const double> power_trace, size_t onset_index,
                      const Thresholds& th, const InhibitorParams& params, double sample_rate,
                      std::vector<GateCheck>* checks_out = nullptr);

}  // namespace betagate
