#pragma once

#include "betagate/protocol.hpp"

namespace betagate {

// Per-trial flags, at-least-once semantics: fp is judged over the Move
// phase only, tp over Stop only.
struct TrialOutcome {
  bool fp = false;
  bool tp = false;
  int session_index = 0;
  int trial_index = 0;
};

// Evaluates one trial against the control signal. Emissions are attributed
// to the phase containing their timestamp (window end time), half-open
// [start, end). Throws ScoringError if the series does not cover the trial.
TrialOutcome score_trial(const ControlSignal& cs, const Thresholds& th, const TrialRecord& record);

struct PerformanceRow {
  std::string run_id;
  TaskType task = TaskType::real_movement;
  bool inhibitor_enabled = false;
  double fp = 0.0;  // counts, fractional in average rows
  double tp = 0.0;
  double hf = 0.0;  // tp - fp
  int n_trials = 0;
  double ready_mean = 0.0;
  double ready_std = 0.0;  // population
  bool is_average = false;
};

struct PerformanceTable {
  std::vector<PerformanceRow> rows;  // data rows first, then average rows
};

// One run's outcomes into per-(task, condition) rows plus average rows.
PerformanceTable aggregate(const std::string& run_id, const std::vector<TrialOutcome>& outcomes,
                           const std::vector<TrialRecord>& records);

// Concatenates the data rows of several runs and recomputes the average
// rows as the arithmetic mean of the per-run values.
PerformanceTable merge_tables(const std::vector<PerformanceTable>& tables);

enum class ReportFormat { csv, json, text };

ReportFormat report_format_from_string(const std::string& s);  // usage error if unknown

std::string render_report(const PerformanceTable& table, ReportFormat format);

// Inverse of render_report's JSON form; used by the report subcommand.
PerformanceTable table_from_json_text(const std::string& text);

}  // namespace betagate
