#include "betagate/experiment.hpp"

namespace betagate {

ExperimentResult run_full_experiment(const EngineParams& params, const ExperimentPlan& plan,
                                     FrameSource& src, const std::string& run_id,
                                     bool record_frames) {
  Engine engine(params.layout, params.pipeline, params.thresholds, params.inhibitor,
                params.protocol, record_frames);
  ExperimentResult result;
  result.plan = plan;
  result.calibration = engine.run_baseline(src);
  result.records = engine.run_sessions(src, plan);

  const ControlSignal cs{engine.cs_series()};
  result.outcomes.reserve(result.records.size());
  for (const auto& rec : result.records) {
    result.outcomes.push_back(score_trial(cs, result.calibration.thresholds, rec));
  }
  result.table = aggregate(run_id, result.outcomes, result.records);
  result.cs = engine.cs_series();
  result.is = engine.is_series();
  result.bursts = engine.bursts();
  result.events = engine.events();
  result.recording = engine.recorded();
  return result;
}

PerformanceTable score_recording(const EngineParams& params, const MultiChannelRecording& rec,
                                 const Thresholds& th, const std::vector<TrialRecord>& records,
                                 const std::string& run_id,
                                 std::vector<TrialOutcome>* outcomes_out) {
  const ControlSignal cs = control_signal(rec, params.pipeline);
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(records.size());
  for (const auto& r : records) outcomes.push_back(score_trial(cs, th, r));
  PerformanceTable table = aggregate(run_id, outcomes, records);
  if (outcomes_out) *outcomes_out = std::move(outcomes);
  return table;
}

}  // namespace betagate
