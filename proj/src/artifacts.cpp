#include "betagate/artifacts.hpp"

#include <sstream>

#include <json.hpp>

namespace betagate {

namespace {

using nlohmann::json;

json meta_json(const ArtifactMeta& meta) {
  return json{{"config_fingerprint", meta.config_fingerprint}, {"seed", meta.seed}};
}

json bounds_json(const PhaseBounds& b, double rate) {
  if (!b.entered()) return nullptr;
  json j{{"start_sample", b.start_sample}, {"start_s", static_cast<double>(b.start_sample) / rate}};
  if (b.complete()) {
    j["end_sample"] = b.end_sample;
    j["end_s"] = static_cast<double>(b.end_sample) / rate;
  }
  return j;
}

PhaseBounds bounds_from_json(const json& j) {
  PhaseBounds b;
  if (j.is_null()) return b;
  b.start_sample = j.at("start_sample").get<int64_t>();
  if (j.contains("end_sample")) b.end_sample = j.at("end_sample").get<int64_t>();
  return b;
}

}  // namespace

std::string calibration_to_json(const CalibrationResult& cal, const ArtifactMeta& meta) {
  json j = meta_json(meta);
  j["mean"] = cal.stats.mean;
  j["std"] = cal.stats.std;
  j["n_samples"] = cal.stats.n_samples;
  j["duration"] = cal.stats.duration;
  j["th1"] = cal.thresholds.th1;
  j["th2"] = cal.thresholds.th2;
  return j.dump(2) + "\n";
}

CalibrationResult calibration_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration JSON: ") + e.what(), 0);
  }
  CalibrationResult cal;
  try {
    cal.stats.mean = j.at("mean").get<double>();
    cal.stats.std = j.at("std").get<double>();
    cal.stats.n_samples = j.at("n_samples").get<int64_t>();
    cal.stats.duration = j.at("duration").get<double>();
    cal.thresholds.th1 = j.at("th1").get<double>();
    cal.thresholds.th2 = j.at("th2").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration JSON field: ") + e.what(), 0);
  }
  return cal;
}

std::string plan_to_json(const ExperimentPlan& plan, const ArtifactMeta& meta) {
  json j = meta_json(meta);
  j["rng_seed"] = plan.rng_seed;
  j["sessions"] = json::array();
  for (size_t i = 0; i < plan.sessions.size(); ++i) {
    const auto& s = plan.sessions[i];
    j["sessions"].push_back(json{{"index", i},
                                 {"task", to_string(s.task)},
                                 {"inhibitor", s.inhibitor_enabled},
                                 {"n_trials", s.n_trials}});
  }
  return j.dump(2) + "\n";
}

ExperimentPlan plan_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan JSON: ") + e.what(), 0);
  }
  ExperimentPlan plan;
  plan.rng_seed = j.value("rng_seed", 0ull);
  for (const auto& s : j.at("sessions")) {
    SessionPlan sp;
    sp.task = task_from_string(s.at("task").get<std::string>());
    sp.inhibitor_enabled = s.at("inhibitor").get<bool>();
    sp.n_trials = s.at("n_trials").get<int>();
    plan.sessions.push_back(sp);
  }
  return plan;
}

std::string trials_to_jsonl(const std::vector<TrialRecord>& records,
                            const std::vector<TrialOutcome>* outcomes, const ArtifactMeta& meta) {
  std::string out;
  {
    json header = meta_json(meta);
    header["type"] = "header";
    out += header.dump() + "\n";
  }
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    json j{{"type", "trial"},
           {"session", r.session_index},
           {"trial", r.trial_index},
           {"task", to_string(r.task)},
           {"inhibitor", r.inhibitor_enabled},
           {"sample_rate", r.sample_rate},
           {"ready_duration", r.ready_duration},
           {"phases",
            {{"ready", bounds_json(r.ready, r.sample_rate)},
             {"steady", bounds_json(r.steady, r.sample_rate)},
             {"move", bounds_json(r.move, r.sample_rate)},
             {"stop", bounds_json(r.stop, r.sample_rate)},
             {"inter_trial", bounds_json(r.inter_trial, r.sample_rate)}}}};
    if (r.gate) {
      json checks = json::array();
      for (const auto& c : r.gate_checks) {
        checks.push_back(json{{"elapsed_s", c.elapsed_s},
                              {"fraction_below", c.fraction_below},
                              {"ready", c.ready}});
      }
      j["gate"] = json{{"released_at", r.gate->released_at},
                       {"reason", to_string(r.gate->reason)},
                       {"checks_evaluated", r.gate->checks_evaluated},
                       {"checks", checks}};
    } else {
      j["gate"] = nullptr;
    }
    if (outcomes) {
      j["fp"] = (*outcomes)[i].fp;
      j["tp"] = (*outcomes)[i].tp;
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<TrialRecord> trials_from_jsonl_text(const std::string& text) {
  std::vector<TrialRecord> records;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("trial log: ") + e.what(), line_no);
    }
    if (j.value("type", "") != "trial") continue;
    try {
      TrialRecord r;
      r.session_index = j.at("session").get<int>();
      r.trial_index = j.at("trial").get<int>();
      r.task = task_from_string(j.at("task").get<std::string>());
      r.inhibitor_enabled = j.at("inhibitor").get<bool>();
      r.sample_rate = j.at("sample_rate").get<double>();
      r.ready_duration = j.at("ready_duration").get<double>();
      const auto& ph = j.at("phases");
      r.ready = bounds_from_json(ph.at("ready"));
      r.steady = bounds_from_json(ph.at("steady"));
      r.move = bounds_from_json(ph.at("move"));
      r.stop = bounds_from_json(ph.at("stop"));
      r.inter_trial = bounds_from_json(ph.at("inter_trial"));
      if (j.contains("gate") && !j.at("gate").is_null()) {
        const auto& g = j.at("gate");
        GateDecision d;
        d.released_at = g.at("released_at").get<double>();
        const std::string reason = g.at("reason").get<std::string>();
        d.reason = reason == "timeout" ? GateDecision::Reason::timeout
                                       : GateDecision::Reason::readiness_met;
        d.checks_evaluated = g.at("checks_evaluated").get<int>();
        r.gate = d;
        for (const auto& c : g.at("checks")) {
          r.gate_checks.push_back(GateCheck{c.at("elapsed_s").get<double>(),
                                            c.at("fraction_below").get<double>(),
                                            c.at("ready").get<bool>()});
        }
      }
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string("trial log field: ") + e.what(), line_no);
    }
  }
  return records;
}

std::string events_to_jsonl(const std::vector<EngineEvent>& events, const ArtifactMeta& meta) {
  std::string out;
  {
    json header = meta_json(meta);
    header["type"] = "header";
    out += header.dump() + "\n";
  }
  for (const auto& e : events) {
    json j{{"time", e.time}};
    if (e.session_index >= 0) {
      j["session"] = e.session_index;
      j["trial"] = e.trial_index;
    }
    switch (e.kind) {
      case EngineEvent::Kind::phase:
        j["type"] = "phase";
        j["phase"] = to_string(e.phase);
        break;
      case EngineEvent::Kind::burst:
        j["type"] = "burst";
        j["cs"] = e.cs_value;
        j["th1"] = e.th1;
        j["lift"] = e.lift;
        break;
      case EngineEvent::Kind::gate_check:
        j["type"] = "gate_check";
        j["fraction_below"] = e.fraction_below;
        break;
      case EngineEvent::Kind::gate_release:
        j["type"] = "gate_release";
        j["released_at"] = e.released_at;
        j["reason"] = e.reason;
        break;
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::string table_artifact_to_json(const PerformanceTable& table, const ArtifactMeta& meta) {
  json j;
  try {
    j = json::parse(render_report(table, ReportFormat::json));
  } catch (const json::exception& e) {
    throw EngineError(std::string("internal: report JSON: ") + e.what());
  }
  j["config_fingerprint"] = meta.config_fingerprint;
  j["seed"] = meta.seed;
  return j.dump(2) + "\n";
}

PerformanceTable table_from_artifact_text(const std::string& text) {
  return table_from_json_text(text);
}

}  // namespace betagate
