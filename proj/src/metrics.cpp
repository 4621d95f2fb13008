#include "betagate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "betagate/num.hpp"

namespace betagate {

namespace {

bool any_above(const BandPowerSeries& s, double th1, int64_t k_lo, int64_t k_hi) {
  for (int64_t k = k_lo; k < k_hi; ++k) {
    if (s.values[static_cast<size_t>(k)] > th1) return true;
  }
  return false;
}

}  // namespace

TrialOutcome score_trial(const ControlSignal& cs, const Thresholds& th,
                         const TrialRecord& record) {
  if (!(th.th1 > th.th2) || th.th2 < 0.0) {
    throw ScoringError("thresholds are degenerate (need th1 > th2 >= 0)");
  }
  if (!record.move.complete() || !record.stop.complete()) {
    throw ScoringError("trial record is incomplete; cannot score");
  }
  const auto& s = cs.series;
  const auto [move_lo, move_hi] =
      emission_index_range(s.first_emit_time, s.hop, record.start_s(TrialPhase::move),
                           record.end_s(TrialPhase::move));
  const auto [stop_lo, stop_hi] =
      emission_index_range(s.first_emit_time, s.hop, record.start_s(TrialPhase::stop),
                           record.end_s(TrialPhase::stop));
  if (stop_hi > static_cast<int64_t>(s.values.size()) ||
      move_hi > static_cast<int64_t>(s.values.size())) {
    throw ScoringError("control signal does not cover the trial span");
  }
  TrialOutcome out;
  out.session_index = record.session_index;
  out.trial_index = record.trial_index;
  out.fp = any_above(s, th.th1, move_lo, move_hi);
  out.tp = any_above(s, th.th1, stop_lo, stop_hi);
  return out;
}

namespace {

struct GroupKey {
  TaskType task;
  bool inhibitor;
  bool operator<(const GroupKey& o) const {
    if (task != o.task) return task < o.task;
    return inhibitor > o.inhibitor;  // "on" rows before "off", Table order
  }
};

PerformanceRow make_row(const std::string& run_id, GroupKey key,
                        const std::vector<const TrialRecord*>& recs,
                        const std::vector<const TrialOutcome*>& outs) {
  PerformanceRow row;
  row.run_id = run_id;
  row.task = key.task;
  row.inhibitor_enabled = key.inhibitor;
  row.n_trials = static_cast<int>(recs.size());
  for (const auto* o : outs) {
    if (o->fp) row.fp += 1.0;
    if (o->tp) row.tp += 1.0;
  }
  row.hf = row.tp - row.fp;
  double mean = 0.0;
  for (const auto* r : recs) mean += r->ready_duration;
  mean /= static_cast<double>(recs.size());
  double var = 0.0;
  for (const auto* r : recs) {
    const double d = r->ready_duration - mean;
    var += d * d;
  }
  row.ready_mean = mean;
  row.ready_std = std::sqrt(var / static_cast<double>(recs.size()));
  return row;
}

std::vector<PerformanceRow> average_rows(const std::vector<PerformanceRow>& data) {
  std::map<GroupKey, std::vector<const PerformanceRow*>> groups;
  for (const auto& r : data) groups[{r.task, r.inhibitor_enabled}].push_back(&r);
  std::vector<PerformanceRow> rows;
  for (const auto& [key, members] : groups) {
    PerformanceRow avg;
    avg.run_id = "average";
    avg.task = key.task;
    avg.inhibitor_enabled = key.inhibitor;
    avg.is_average = true;
    const double n = static_cast<double>(members.size());
    double n_trials = 0.0;
    for (const auto* m : members) {
      avg.fp += m->fp;
      avg.tp += m->tp;
      avg.hf += m->hf;
      avg.ready_mean += m->ready_mean;
      avg.ready_std += m->ready_std;
      n_trials += static_cast<double>(m->n_trials);
    }
    avg.fp /= n;
    avg.tp /= n;
    avg.hf /= n;
    avg.ready_mean /= n;
    avg.ready_std /= n;
    avg.n_trials = static_cast<int>(std::llround(n_trials / n));
    rows.push_back(avg);
  }
  return rows;
}

}  // namespace

PerformanceTable aggregate(const std::string& run_id, const std::vector<TrialOutcome>& outcomes,
                           const std::vector<TrialRecord>& records) {
  if (outcomes.size() != records.size()) {
    throw ScoringError("outcome and record counts differ");
  }
  std::map<GroupKey, std::pair<std::vector<const TrialRecord*>, std::vector<const TrialOutcome*>>>
      groups;
  for (size_t i = 0; i < records.size(); ++i) {
    auto& g = groups[{records[i].task, records[i].inhibitor_enabled}];
    g.first.push_back(&records[i]);
    g.second.push_back(&outcomes[i]);
  }
  PerformanceTable table;
  for (const auto& [key, g] : groups) {
    table.rows.push_back(make_row(run_id, key, g.first, g.second));
  }
  const auto avgs = average_rows(table.rows);
  table.rows.insert(table.rows.end(), avgs.begin(), avgs.end());
  return table;
}

PerformanceTable merge_tables(const std::vector<PerformanceTable>& tables) {
  PerformanceTable merged;
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      if (!r.is_average) merged.rows.push_back(r);
    }
  }
  const auto avgs = average_rows(merged.rows);
  merged.rows.insert(merged.rows.end(), avgs.begin(), avgs.end());
  return merged;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "text") return ReportFormat::text;
  throw ConfigError("unknown report format '" + s + "' (expected csv|json|text)");
}

namespace {

nlohmann::json row_to_json(const PerformanceRow& r) {
  return nlohmann::json{{"run", r.run_id},
                        {"task", to_string(r.task)},
                        {"inhibitor", r.inhibitor_enabled ? "on" : "off"},
                        {"ready_mean", r.ready_mean},
                        {"ready_std", r.ready_std},
                        {"fp", r.fp},
                        {"tp", r.tp},
                        {"hf", r.hf},
                        {"n", r.n_trials},
                        {"average", r.is_average}};
}

std::string render_csv(const PerformanceTable& table) {
  std::string out = "run,task,inhibitor,ready_mean,ready_std,fp,tp,hf,n\n";
  for (const auto& r : table.rows) {
    out += r.run_id;
    out += ',';
    out += to_string(r.task);
    out += ',';
    out += r.inhibitor_enabled ? "on" : "off";
    out += ',';
    out += format_double(r.ready_mean);
    out += ',';
    out += format_double(r.ready_std);
    out += ',';
    out += format_double(r.fp);
    out += ',';
    out += format_double(r.tp);
    out += ',';
    out += format_double(r.hf);
    out += ',';
    out += std::to_string(r.n_trials);
    out += '\n';
  }
  return out;
}

std::string render_text(const PerformanceTable& table) {
  std::ostringstream os;
  os << "run          task       inhibitor  ready (s)          fp      tp      hf\n";
  os << "---------------------------------------------------------------------------\n";
  auto line = [&](const PerformanceRow& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %-10s %-10s %5.2f +- %-7.2f  %5.2g/%-3d %4.3g/%-3d %6.4g\n",
                  r.run_id.c_str(), to_string(r.task).c_str(),
                  r.inhibitor_enabled ? "on" : "off", r.ready_mean, r.ready_std, r.fp, r.n_trials,
                  r.tp, r.n_trials, r.hf);
    os << buf;
  };
  bool avg_break = false;
  for (const auto& r : table.rows) {
    if (r.is_average && !avg_break) {
      os << "---------------------------------------------------------------------------\n";
      avg_break = true;
    }
    line(r);
  }
  return os.str();
}

}  // namespace

std::string render_report(const PerformanceTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: return render_csv(table);
    case ReportFormat::text: return render_text(table);
    case ReportFormat::json: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : table.rows) rows.push_back(row_to_json(r));
      return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
    }
  }
  throw ConfigError("unknown report format");
}

PerformanceTable table_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("table JSON: ") + e.what(), 0);
  }
  if (!j.contains("rows") || !j["rows"].is_array()) {
    throw ParseError("table JSON has no 'rows' array", 0);
  }
  PerformanceTable table;
  for (const auto& row : j["rows"]) {
    PerformanceRow r;
    r.run_id = row.at("run").get<std::string>();
    r.task = task_from_string(row.at("task").get<std::string>());
    const std::string inh = row.at("inhibitor").get<std::string>();
    if (inh != "on" && inh != "off") throw ParseError("inhibitor must be on|off", 0);
    r.inhibitor_enabled = inh == "on";
    r.ready_mean = row.at("ready_mean").get<double>();
    r.ready_std = row.at("ready_std").get<double>();
    r.fp = row.at("fp").get<double>();
    r.tp = row.at("tp").get<double>();
    r.hf = row.at("hf").get<double>();
    r.n_trials = row.at("n").get<int>();
    r.is_average = row.value("average", false);
    table.rows.push_back(r);
  }
  return table;
}

}  // namespace betagate
