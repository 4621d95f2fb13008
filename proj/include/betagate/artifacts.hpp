#pragma once

#include <string>

#include "betagate/config.hpp"

namespace betagate {

// JSON / JSON-lines forms of the run artifacts. Every artifact embeds the
// config fingerprint and seed.
struct ArtifactMeta {
  std::string config_fingerprint;
  uint64_t seed = 0;
};

std::string calibration_to_json(const CalibrationResult& cal, const ArtifactMeta& meta);
CalibrationResult calibration_from_json_text(const std::string& text);

std::string plan_to_json(const ExperimentPlan& plan, const ArtifactMeta& meta);
ExperimentPlan plan_from_json_text(const std::string& text);

// One trial record per line.
std::string trials_to_jsonl(const std::vector<TrialRecord>& records,
                            const std::vector<TrialOutcome>* outcomes, const ArtifactMeta& meta);
std::vector<TrialRecord> trials_from_jsonl_text(const std::string& text);

// Phase changes, burst events with lift, gate checks and releases.
std::string events_to_jsonl(const std::vector<EngineEvent>& events, const ArtifactMeta& meta);

// Report artifact: render_report JSON wrapped with meta.
std::string table_artifact_to_json(const PerformanceTable& table, const ArtifactMeta& meta);
PerformanceTable table_from_artifact_text(const std::string& text);

}  // namespace betagate
