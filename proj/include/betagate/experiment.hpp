#pragma once

#include "betagate/metrics.hpp"
#include "betagate/synth.hpp"

namespace betagate {

// Everything the engine needs, gathered; EngineConfig (cli-io layer) builds
// this from the config file.
struct EngineParams {
  ChannelLayout layout = ChannelLayout::standard();
  PipelineParams pipeline;
  ThresholdParams thresholds;
  InhibitorParams inhibitor;
  ProtocolParams protocol;
  PlanParams plan;
};

struct ExperimentResult {
  ExperimentPlan plan;
  CalibrationResult calibration;
  std::vector<TrialRecord> records;
  std::vector<TrialOutcome> outcomes;
  PerformanceTable table;
  BandPowerSeries cs;
  BandPowerSeries is;
  std::vector<BurstEvent> bursts;
  std::vector<EngineEvent> events;
  MultiChannelRecording recording;  // filled when record_frames is set
};

// Baseline, all sessions, live scoring. One continuous stream.
ExperimentResult run_full_experiment(const EngineParams& params, const ExperimentPlan& plan,
                                     FrameSource& src, const std::string& run_id,
                                     bool record_frames = false);

// Offline path of the score subcommand: recompute the control signal from a
// persisted recording and score the logged trials against the persisted
// thresholds. Reproduces the live table exactly.
PerformanceTable score_recording(const EngineParams& params, const MultiChannelRecording& rec,
                                 const Thresholds& th, const std::vector<TrialRecord>& records,
                                 const std::string& run_id,
                                 std::vector<TrialOutcome>* outcomes_out = nullptr);

}  // namespace betagate
