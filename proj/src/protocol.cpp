#include "betagate/protocol.hpp"

#include <cmath>

#include "betagate/rng.hpp"

namespace betagate {

ExperimentPlan build_experiment_plan(const PlanParams& params, uint64_t seed) {
  if (params.sessions_per_task <= 0) throw ConfigError("sessions_per_task must be positive");
  if (params.trials_per_session <= 0) throw ConfigError("trials_per_session must be positive");
  if (params.sessions_per_task % 2 != 0) {
    throw ConfigError("balanced inhibitor on/off needs an even sessions_per_task, got " +
                      std::to_string(params.sessions_per_task));
  }
  if (params.task_order.empty()) throw ConfigError("task_order must not be empty");

  Rng rng(substream_seed(seed, "plan"));
  ExperimentPlan plan;
  plan.rng_seed = seed;
  for (TaskType task : params.task_order) {
    std::vector<bool> on(static_cast<size_t>(params.sessions_per_task), false);
    for (int i = 0; i < params.sessions_per_task / 2; ++i) on[static_cast<size_t>(i)] = true;
    // Fisher-Yates within the task block
    for (size_t i = on.size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(rng.uniform() * static_cast<double>(i + 1));
      std::swap(on[i], on[j]);
    }
    for (bool enabled : on) {
      plan.sessions.push_back(SessionPlan{task, enabled, params.trials_per_session});
    }
  }
  return plan;
}

std::string to_string(TrialPhase p) {
  switch (p) {
    case TrialPhase::baseline: return "baseline";
    case TrialPhase::ready: return "ready";
    case TrialPhase::steady: return "steady";
    case TrialPhase::move: return "move";
    case TrialPhase::stop: return "stop";
    case TrialPhase::inter_trial: return "inter_trial";
  }
  return "?";
}

const PhaseBounds& TrialRecord::bounds(TrialPhase p) const {
  switch (p) {
    case TrialPhase::ready: return ready;
    case TrialPhase::steady: return steady;
    case TrialPhase::move: return move;
    case TrialPhase::stop: return stop;
    case TrialPhase::inter_trial: return inter_trial;
    default: throw EngineError("trial records carry no baseline bounds");
  }
}

double TrialRecord::start_s(TrialPhase p) const {
  return static_cast<double>(bounds(p).start_sample) / sample_rate;
}

double TrialRecord::end_s(TrialPhase p) const {
  return static_cast<double>(bounds(p).end_sample) / sample_rate;
}

bool TrialRecord::complete() const {
  return ready.complete() && steady.complete() && move.complete() && stop.complete() &&
         inter_trial.complete();
}

bool RecordingSource::next(Frame& out) {
  if (cursor_ >= rec_.frames.size()) return false;
  out = rec_.frames[cursor_++];
  return true;
}

Engine::Engine(ChannelLayout layout, PipelineParams pipeline, ThresholdParams threshold_params,
               InhibitorParams inhibitor, ProtocolParams protocol, bool record_frames)
    : layout_(std::move(layout)),
      pipeline_params_(pipeline),
      threshold_params_(threshold_params),
      inhibitor_params_(inhibitor),
      protocol_params_(protocol),
      record_frames_(record_frames),
      pre_(layout_, pipeline),
      cs_power_(pipeline.cs_window_s, pipeline.cs_hop_s, layout_.sample_rate),
      cs_smooth_(pipeline.cs_smoothing),
      is_power_(inhibitor.is_window_s, inhibitor.is_hop_s, layout_.sample_rate),
      frame_buf_(layout_.size(), 0.0) {
  layout_.validate();
  const auto w = static_cast<size_t>(std::llround(inhibitor.is_window_s * layout_.sample_rate));
  power_ring_.assign(w, 0.0);
  cs_series_.window_len = pipeline.cs_window_s;
  cs_series_.hop = pipeline.cs_hop_s;
  cs_series_.first_emit_time = pipeline.cs_window_s;
  is_series_.window_len = inhibitor.is_window_s;
  is_series_.hop = inhibitor.is_hop_s;
  is_series_.first_emit_time = inhibitor.is_window_s;
  recorded_.layout = layout_;
}

int64_t Engine::whole_phase_samples(double seconds, const char* what) const {
  const double s = seconds * layout_.sample_rate;
  const auto n = std::llround(s);
  if (n < 1 || std::abs(s - static_cast<double>(n)) > 1e-6) {
    throw ConfigError(std::string(what) + " duration must be a positive whole number of samples");
  }
  return n;
}

void Engine::emit_phase_event(TrialPhase p, int session, int trial) {
  EngineEvent ev;
  ev.kind = EngineEvent::Kind::phase;
  ev.time = static_cast<double>(consumed_) / layout_.sample_rate;
  ev.session_index = session;
  ev.trial_index = trial;
  ev.phase = p;
  events_.push_back(ev);
}

bool Engine::step(FrameSource& src) {
  if (!src.next(frame_buf_)) return false;
  if (frame_buf_.size() != layout_.size()) {
    throw EngineError("source produced a frame with " + std::to_string(frame_buf_.size()) +
                      " channels, layout has " + std::to_string(layout_.size()));
  }
  if (record_frames_) recorded_.frames.push_back(frame_buf_);
  const double beta = pre_.push(frame_buf_);
  last_beta_power_ = beta * beta;
  power_ring_[static_cast<size_t>(consumed_ % static_cast<int64_t>(power_ring_.size()))] =
      last_beta_power_;
  last_cs_.reset();
  if (auto raw = cs_power_.push(beta)) {
    last_cs_ = cs_smooth_.push(*raw);
    cs_series_.values.push_back(*last_cs_);
  }
  if (auto isv = is_power_.push(beta)) is_series_.values.push_back(*isv);
  ++consumed_;
  return true;
}

CalibrationResult Engine::run_baseline(FrameSource& src) {
  if (calibration_) throw CalibrationError("baseline already calibrated; it runs once, at startup");
  if (consumed_ != 0) throw CalibrationError("baseline must start at the beginning of the stream");
  const int64_t target = whole_phase_samples(protocol_params_.baseline_s, "baseline");
  emit_phase_event(TrialPhase::baseline, -1, -1);
  const size_t cs0 = cs_series_.values.size();
  while (consumed_ < target) {
    if (!step(src)) {
      throw CalibrationError("insufficient baseline signal: got " +
                             std::to_string(static_cast<double>(consumed_) / layout_.sample_rate) +
                             " s of " + std::to_string(protocol_params_.baseline_s) + " s");
    }
  }
  BandPowerSeries baseline_cs;
  baseline_cs.window_len = cs_series_.window_len;
  baseline_cs.hop = cs_series_.hop;
  baseline_cs.first_emit_time = cs_series_.first_emit_time;
  baseline_cs.values.assign(cs_series_.values.begin() + static_cast<std::ptrdiff_t>(cs0),
                            cs_series_.values.end());
  CalibrationResult result;
  result.stats = compute_baseline(baseline_cs);
  result.thresholds = compute_thresholds(result.stats, threshold_params_);
  calibration_ = result;
  return result;
}

TrialRecord Engine::run_trial(FrameSource& src, const SessionPlan& session, int session_index,
                              int trial_index) {
  if (!calibration_) throw CalibrationError("run_trial requires a calibrated baseline");
  const Thresholds th = calibration_->thresholds;

  TrialRecord record;
  record.session_index = session_index;
  record.trial_index = trial_index;
  record.task = session.task;
  record.inhibitor_enabled = session.inhibitor_enabled;
  record.sample_rate = layout_.sample_rate;

  TrialContext ctx{session_index, trial_index, session.task, session.inhibitor_enabled, consumed_};
  src.on_trial_start(ctx);

  auto pull = [&](const char* phase_name) {
    if (!step(src)) {
      throw TruncatedTrialError("source exhausted during " + std::string(phase_name) +
                                    " of session " + std::to_string(session_index) + " trial " +
                                    std::to_string(trial_index),
                                record);
    }
    if (last_cs_ && *last_cs_ > th.th1) {
      const double t = cs_series_.emit_time(cs_series_.values.size() - 1);
      bursts_.push_back({t, *last_cs_, th.th1});
      EngineEvent ev;
      ev.kind = EngineEvent::Kind::burst;
      ev.time = t;
      ev.session_index = session_index;
      ev.trial_index = trial_index;
      ev.cs_value = *last_cs_;
      ev.th1 = th.th1;
      ev.lift = lift_output(*last_cs_, th);
      events_.push_back(ev);
    }
  };

  // Ready: gate-controlled or fixed
  record.ready.start_sample = consumed_;
  src.on_phase_change(TrialPhase::ready, consumed_);
  emit_phase_event(TrialPhase::ready, session_index, trial_index);
  if (session.inhibitor_enabled) {
    InhibitorGate gate(th, inhibitor_params_, layout_.sample_rate);
    // replay the trailing window so the gate sees pre-onset history
    const auto cap = static_cast<int64_t>(power_ring_.size());
    for (int64_t i = std::max<int64_t>(consumed_ - cap, 0); i < consumed_; ++i) {
      gate.feed(power_ring_[static_cast<size_t>(i % cap)]);
    }
    gate.arm();
    const double onset_s = static_cast<double>(consumed_) / layout_.sample_rate;
    std::optional<GateDecision> decision;
    while (!decision) {
      pull("ready");
      decision = gate.feed(last_beta_power_);
    }
    record.gate = *decision;
    record.gate_checks = gate.checks();
    for (const auto& c : gate.checks()) {
      EngineEvent ev;
      ev.kind = EngineEvent::Kind::gate_check;
      ev.time = onset_s + c.elapsed_s;
      ev.session_index = session_index;
      ev.trial_index = trial_index;
      ev.fraction_below = c.fraction_below;
      events_.push_back(ev);
    }
    EngineEvent rel;
    rel.kind = EngineEvent::Kind::gate_release;
    rel.time = onset_s + decision->released_at;
    rel.session_index = session_index;
    rel.trial_index = trial_index;
    rel.released_at = decision->released_at;
    rel.reason = to_string(decision->reason);
    events_.push_back(rel);
  } else {
    const int64_t target = whole_phase_samples(protocol_params_.ready_s, "ready");
    while (consumed_ - record.ready.start_sample < target) pull("ready");
  }
  record.ready.end_sample = consumed_;
  record.ready_duration =
      static_cast<double>(record.ready.end_sample - record.ready.start_sample) /
      layout_.sample_rate;

  const struct {
    TrialPhase phase;
    double duration;
    PhaseBounds* bounds;
    const char* name;
  } fixed_phases[] = {
      {TrialPhase::steady, protocol_params_.steady_s, &record.steady, "steady"},
      {TrialPhase::move, protocol_params_.move_s, &record.move, "move"},
      {TrialPhase::stop, protocol_params_.stop_s, &record.stop, "stop"},
      {TrialPhase::inter_trial, protocol_params_.inter_trial_s, &record.inter_trial,
       "inter_trial"},
  };
  for (const auto& ph : fixed_phases) {
    ph.bounds->start_sample = consumed_;
    src.on_phase_change(ph.phase, consumed_);
    emit_phase_event(ph.phase, session_index, trial_index);
    const int64_t target = whole_phase_samples(ph.duration, ph.name);
    while (consumed_ - ph.bounds->start_sample < target) pull(ph.name);
    ph.bounds->end_sample = consumed_;
  }
  return record;
}

std::vector<TrialRecord> Engine::run_sessions(FrameSource& src, const ExperimentPlan& plan) {
  if (!calibration_) throw CalibrationError("run_sessions requires a calibrated baseline");
  if (calibration_->thresholds.degenerate()) {
    throw CalibrationError(
        "calibration is degenerate (zero baseline variance, th1 == th2); refusing to run");
  }
  std::vector<TrialRecord> records;
  records.reserve(plan.sessions.size() * 10u);
  for (size_t s = 0; s < plan.sessions.size(); ++s) {
    const SessionPlan& session = plan.sessions[s];
    for (int t = 0; t < session.n_trials; ++t) {
      records.push_back(run_trial(src, session, static_cast<int>(s), t));
    }
  }
  return records;
}

}  // namespace betagate
