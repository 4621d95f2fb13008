#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betagate/gate.hpp"

namespace betagate {

struct ProtocolParams {
  double baseline_s = 25.0;
  double ready_s = 3.0;  // fixed Ready duration when the inhibitor is off
  double steady_s = 1.0;
  double move_s = 3.0;
  double stop_s = 3.0;
  double inter_trial_s = 4.0;
};

struct PlanParams {
  int sessions_per_task = 6;
  int trials_per_session = 10;
  std::vector<TaskType> task_order = {TaskType::real_movement, TaskType::imaginary_movement};
};

struct SessionPlan {
  TaskType task = TaskType::real_movement;
  bool inhibitor_enabled = false;
  int n_trials = 10;
};

struct ExperimentPlan {
  std::vector<SessionPlan> sessions;
  uint64_t rng_seed = 0;
};

// Task blocks in the configured order; within each block exactly half the
// sessions run with the inhibitor, order shuffled by the plan substream of
// the seed. Deterministic per seed.
ExperimentPlan build_experiment_plan(const PlanParams& params, uint64_t seed);

enum class TrialPhase { baseline, ready, steady, move, stop, inter_trial };

std::string to_string(TrialPhase p);

// Half-open [start, end) on the sample clock; {-1, -1} marks a phase that
// was never entered (truncated trials).
struct PhaseBounds {
  int64_t start_sample = -1;
  int64_t end_sample = -1;

  bool entered() const { return start_sample >= 0; }
  bool complete() const { return start_sample >= 0 && end_sample >= start_sample; }
};

struct TrialRecord {
  int session_index = 0;
  int trial_index = 0;
  TaskType task = TaskType::real_movement;
  bool inhibitor_enabled = false;
  double sample_rate = 512.0;

  PhaseBounds ready, steady, move, stop, inter_trial;

  double ready_duration = 0.0;  // seconds
  std::optional<GateDecision> gate;
  std::vector<GateCheck> gate_checks;

  const PhaseBounds& bounds(TrialPhase p) const;
  double start_s(TrialPhase p) const;
  double end_s(TrialPhase p) const;
  bool complete() const;
};

// Carries the partially recorded trial when a source runs dry mid-trial.
class TruncatedTrialError : public EngineError {
 public:
  TruncatedTrialError(const std::string& msg, TrialRecord partial)
      : EngineError(msg), partial_(std::move(partial)) {}
  const TrialRecord& partial() const { return partial_; }

 private:
  TrialRecord partial_;
};

struct TrialContext {
  int session_index = 0;
  int trial_index = 0;
  TaskType task = TaskType::real_movement;
  bool inhibitor_enabled = false;
  int64_t ready_onset_sample = 0;
};

// Pull interface the engine consumes. Sources that synthesize content
// lazily receive trial and phase notifications; replay sources ignore them.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  // Fill `out` (layout order) and return true, or return false when dry.
  virtual bool next(Frame& out) = 0;
  virtual void on_trial_start(const TrialContext&) {}
  virtual void on_phase_change(TrialPhase, int64_t /*start_sample*/) {}
};

class RecordingSource : public FrameSource {
 public:
  explicit RecordingSource(const MultiChannelRecording& rec) : rec_(rec) {}
  bool next(Frame& out) override;

 private:
  const MultiChannelRecording& rec_;
  size_t cursor_ = 0;
};

struct EngineEvent {
  enum class Kind { phase, burst, gate_check, gate_release };
  Kind kind = Kind::phase;
  double time = 0.0;  // seconds from stream start
  int session_index = -1;
  int trial_index = -1;
  TrialPhase phase = TrialPhase::baseline;  // kind == phase
  double cs_value = 0.0, th1 = 0.0, lift = 0.0;  // kind == burst
  double fraction_below = 0.0;                   // kind == gate_check
  double released_at = 0.0;                      // kind == gate_release
  std::string reason;                            // kind == gate_release
};

struct CalibrationResult {
  BaselineStats stats;
  Thresholds thresholds;
};

// Streams an experiment over a simulated sample clock: one continuous
// pipeline from the first baseline sample to the last inter-trial sample,
// matching online operation. Wall-clock time is never consulted.
class Engine {
 public:
  Engine(ChannelLayout layout, PipelineParams pipeline, ThresholdParams threshold_params,
         InhibitorParams inhibitor, ProtocolParams protocol, bool record_frames = false);

  // Consumes the baseline period and calibrates. Must run first.
  CalibrationResult run_baseline(FrameSource& src);

  // Ready (gated or fixed) -> Steady -> Move -> Stop -> InterTrial.
  TrialRecord run_trial(FrameSource& src, const SessionPlan& session, int session_index,
                        int trial_index);

  // All sessions of the plan, in order. Refuses degenerate calibrations.
  std::vector<TrialRecord> run_sessions(FrameSource& src, const ExperimentPlan& plan);

  const BandPowerSeries& cs_series() const { return cs_series_; }
  const BandPowerSeries& is_series() const { return is_series_; }
  const std::vector<BurstEvent>& bursts() const { return bursts_; }
  const std::vector<EngineEvent>& events() const { return events_; }
  const MultiChannelRecording& recorded() const { return recorded_; }
  const std::optional<CalibrationResult>& calibration() const { return calibration_; }
  int64_t consumed() const { return consumed_; }
  double sample_rate() const { return layout_.sample_rate; }

 private:
  // Pulls one frame through every pipeline; false when the source is dry.
  bool step(FrameSource& src);
  void emit_phase_event(TrialPhase p, int session, int trial);
  int64_t whole_phase_samples(double seconds, const char* what) const;

  ChannelLayout layout_;
  PipelineParams pipeline_params_;
  ThresholdParams threshold_params_;
  InhibitorParams inhibitor_params_;
  ProtocolParams protocol_params_;
  bool record_frames_;

  PreprocessChain pre_;
  StreamingBandPower cs_power_;
  MovingAverage cs_smooth_;
  StreamingBandPower is_power_;

  // trailing beta instantaneous power, one inhibitor window deep; feeds
  // per-trial gates with pre-onset history
  std::vector<double> power_ring_;
  int64_t consumed_ = 0;

  double last_beta_power_ = 0.0;
  std::optional<double> last_cs_;

  BandPowerSeries cs_series_;
  BandPowerSeries is_series_;
  std::vector<BurstEvent> bursts_;
  std::vector<EngineEvent> events_;
  MultiChannelRecording recorded_;
  std::optional<CalibrationResult> calibration_;
  Frame frame_buf_;
};

}  // namespace betagate
