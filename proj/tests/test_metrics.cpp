#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "betagate/metrics.hpp"
#include "helpers.hpp"

using namespace betagate;
using namespace betagate::testing;

namespace {

const Thresholds kTh{3.0, 1.5};

ControlSignal cs_of(std::vector<double> values, double first_emit = 1.0, double hop = 0.1) {
  ControlSignal cs;
  cs.series.values = std::move(values);
  cs.series.window_len = 1.0;
  cs.series.hop = hop;
  cs.series.first_emit_time = first_emit;
  return cs;
}

TrialRecord record_with(double ready_start_s, double ready_dur = 3.0) {
  TrialRecord r;
  r.sample_rate = 512.0;
  auto set = [](PhaseBounds& b, double s, double e) {
    b.start_sample = static_cast<int64_t>(s * 512.0);
    b.end_sample = static_cast<int64_t>(e * 512.0);
  };
  const double steady = ready_start_s + ready_dur;
  set(r.ready, ready_start_s, steady);
  set(r.steady, steady, steady + 1.0);
  set(r.move, steady + 1.0, steady + 4.0);
  set(r.stop, steady + 4.0, steady + 7.0);
  set(r.inter_trial, steady + 7.0, steady + 11.0);
  r.ready_duration = ready_dur;
  return r;
}

// 30 trials with the first fp_n marked false-positive and first tp_n marked
// true-positive; used to rebuild known per-condition counts.
void fabricate(std::vector<TrialOutcome>& outcomes, std::vector<TrialRecord>& records,
               TaskType task, bool inhibitor, int fp_n, int tp_n, double ready_mean) {
  for (int i = 0; i < 30; ++i) {
    TrialRecord r = record_with(25.0 + 14.0 * static_cast<double>(records.size()));
    r.task = task;
    r.inhibitor_enabled = inhibitor;
    r.trial_index = i % 10;
    r.session_index = static_cast<int>(records.size()) / 10;
    r.ready_duration = ready_mean;
    records.push_back(r);
    TrialOutcome o;
    o.fp = i < fp_n;
    o.tp = i < tp_n;
    outcomes.push_back(o);
  }
}

PerformanceTable subject_table(const std::string& id, int fp_ron, int tp_ron, int fp_roff,
                               int tp_roff, int fp_ion, int tp_ion, int fp_ioff, int tp_ioff) {
  std::vector<TrialOutcome> outcomes;
  std::vector<TrialRecord> records;
  fabricate(outcomes, records, TaskType::real_movement, true, fp_ron, tp_ron, 2.0);
  fabricate(outcomes, records, TaskType::real_movement, false, fp_roff, tp_roff, 3.0);
  fabricate(outcomes, records, TaskType::imaginary_movement, true, fp_ion, tp_ion, 2.0);
  fabricate(outcomes, records, TaskType::imaginary_movement, false, fp_ioff, tp_ioff, 3.0);
  return aggregate(id, outcomes, records);
}

const PerformanceRow& row_of(const PerformanceTable& t, const std::string& run, TaskType task,
                             bool inhibitor) {
  for (const auto& r : t.rows) {
    if (r.run_id == run && r.task == task && r.inhibitor_enabled == inhibitor) return r;
  }
  throw std::runtime_error("row not found");
}

}  // namespace

TEST_CASE("score_trial: quiet, single Stop crossing, boundary attribution") {
  const auto r = record_with(25.0);  // move [29,32), stop [32,35)

  // 400 emissions cover 1.0..40.9 s
  auto quiet = cs_of(std::vector<double>(400, 1.0));
  auto out = score_trial(quiet, kTh, r);
  CHECK(!out.fp);
  CHECK(!out.tp);

  // one crossing at t = 33.0 s -> emission index (33.0 - 1.0) / 0.1 = 320
  auto stop_hit = quiet;
  stop_hit.series.values[320] = 9.0;
  out = score_trial(stop_hit, kTh, r);
  CHECK(!out.fp);
  CHECK(out.tp);

  // a crossing exactly at the Move end boundary belongs to Stop
  auto boundary = quiet;
  boundary.series.values[310] = 9.0;  // t = 32.0, half-open [move, stop)
  out = score_trial(boundary, kTh, r);
  CHECK(!out.fp);
  CHECK(out.tp);
}

TEST_CASE("score_trial: errors") {
  const auto r = record_with(25.0);
  auto cs = cs_of(std::vector<double>(100, 1.0));  // ends at 10.9 s, before Move
  CHECK_THROWS_AS(score_trial(cs, kTh, r), ScoringError);
  auto full = cs_of(std::vector<double>(400, 1.0));
  CHECK_THROWS_AS(score_trial(full, Thresholds{2.0, 2.0}, r), ScoringError);
}

TEST_CASE("score_trial equals a brute-force interval scan on random inputs") {
  Rng rng(55);
  for (int rep = 0; rep < 200; ++rep) {
    const double ready_start = 25.0 + rng.uniform(0.0, 10.0);
    const double ready_dur = 0.5 * std::floor(rng.uniform(1.0, 20.0));
    const auto r = record_with(std::round(ready_start * 2.0) / 2.0, ready_dur);
    std::vector<double> values;
    const size_t n = 600;
    for (size_t i = 0; i < n; ++i) {
      values.push_back(rng.bernoulli(0.1) ? rng.uniform(3.0, 9.0) : rng.uniform(0.0, 3.0));
    }
    const auto cs = cs_of(values);
    const auto got = score_trial(cs, kTh, r);

    bool fp = false, tp = false;
    for (size_t k = 0; k < n; ++k) {
      const double t = cs.series.emit_time(k);
      const bool above = values[k] > kTh.th1;
      if (above && t >= r.start_s(TrialPhase::move) - 1e-9 &&
          t < r.end_s(TrialPhase::move) - 1e-9) {
        fp = true;
      }
      if (above && t >= r.start_s(TrialPhase::stop) - 1e-9 &&
          t < r.end_s(TrialPhase::stop) - 1e-9) {
        tp = true;
      }
    }
    CHECK(got.fp == fp);
    CHECK(got.tp == tp);
  }
}

TEST_CASE("aggregate rebuilds known per-condition rows") {
  // Subject 1 real/on: 29 hits, 9 false alarms
  auto t1 = subject_table("s1", 9, 29, 3, 30, 6, 14, 2, 12);
  const auto& ron = row_of(t1, "s1", TaskType::real_movement, true);
  CHECK(ron.fp == 9.0);
  CHECK(ron.tp == 29.0);
  CHECK(ron.hf == 20.0);
  CHECK(ron.n_trials == 30);
  CHECK(ron.ready_std == 0.0);

  // Subject 2 imaginary/off: hit-false goes negative
  auto t2 = subject_table("s2", 19, 28, 24, 29, 15, 18, 18, 14);
  const auto& ioff = row_of(t2, "s2", TaskType::imaginary_movement, false);
  CHECK(ioff.fp == 18.0);
  CHECK(ioff.tp == 14.0);
  CHECK(ioff.hf == -4.0);

  // Subject 4 imaginary/on
  auto t4 = subject_table("s4", 8, 30, 13, 28, 8, 16, 16, 14);
  const auto& ion = row_of(t4, "s4", TaskType::imaginary_movement, true);
  CHECK(ion.hf == 8.0);
}

TEST_CASE("merging four runs averages the per-run values") {
  const auto t1 = subject_table("s1", 9, 29, 3, 30, 6, 14, 2, 12);
  const auto t2 = subject_table("s2", 19, 28, 24, 29, 15, 18, 18, 14);
  const auto t3 = subject_table("s3", 14, 30, 21, 30, 8, 17, 19, 22);
  const auto t4 = subject_table("s4", 8, 30, 13, 28, 8, 16, 16, 14);
  const auto merged = merge_tables({t1, t2, t3, t4});

  // 4 runs x 2 tasks x 2 conditions, plus one average row per condition pair
  CHECK(merged.rows.size() == 20);

  const auto& avg_ron = row_of(merged, "average", TaskType::real_movement, true);
  CHECK(avg_ron.hf == doctest::Approx(16.75));
  CHECK(avg_ron.fp == doctest::Approx(12.5));
  CHECK(avg_ron.tp == doctest::Approx(29.25));
  const auto& avg_roff = row_of(merged, "average", TaskType::real_movement, false);
  CHECK(avg_roff.hf == doctest::Approx(14.0));
  const auto& avg_ion = row_of(merged, "average", TaskType::imaginary_movement, true);
  CHECK(avg_ion.hf == doctest::Approx(7.0));
  CHECK(avg_ion.fp == doctest::Approx(9.25));
  CHECK(avg_ion.tp == doctest::Approx(16.25));
  const auto& avg_ioff = row_of(merged, "average", TaskType::imaginary_movement, false);
  CHECK(avg_ioff.hf == doctest::Approx(1.75));
  CHECK(avg_ioff.fp == doctest::Approx(13.75));
  CHECK(avg_ioff.tp == doctest::Approx(15.5));
}

TEST_CASE("aggregation is permutation-invariant over trial order") {
  std::vector<TrialOutcome> outcomes;
  std::vector<TrialRecord> records;
  fabricate(outcomes, records, TaskType::real_movement, true, 9, 29, 2.0);
  fabricate(outcomes, records, TaskType::real_movement, false, 3, 30, 3.0);
  const auto base = aggregate("x", outcomes, records);

  // reverse both lists together
  std::reverse(outcomes.begin(), outcomes.end());
  std::reverse(records.begin(), records.end());
  const auto reversed = aggregate("x", outcomes, records);
  CHECK(render_report(base, ReportFormat::csv) == render_report(reversed, ReportFormat::csv));
}

TEST_CASE("hf equals tp - fp on any aggregate") {
  Rng rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<TrialOutcome> outcomes;
    std::vector<TrialRecord> records;
    fabricate(outcomes, records, TaskType::real_movement, true,
              static_cast<int>(rng.uniform(0.0, 31.0)), static_cast<int>(rng.uniform(0.0, 31.0)),
              2.0);
    const auto t = aggregate("p", outcomes, records);
    for (const auto& row : t.rows) CHECK(row.hf == row.tp - row.fp);
  }
}

TEST_CASE("render: empty table, formats, and field equality") {
  CHECK(render_report(PerformanceTable{}, ReportFormat::csv) ==
        "run,task,inhibitor,ready_mean,ready_std,fp,tp,hf,n\n");

  const auto table = subject_table("s1", 9, 29, 3, 30, 6, 14, 2, 12);
  const auto csv = render_report(table, ReportFormat::csv);
  const auto json_text = render_report(table, ReportFormat::json);

  // CSV and JSON carry identical values field by field
  const auto parsed = nlohmann::json::parse(json_text);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  size_t i = 0;
  while (std::getline(lines, line)) {
    const auto& row = parsed["rows"][i];
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(cell == row["run"].get<std::string>());
    std::getline(cells, cell, ',');
    CHECK(cell == row["task"].get<std::string>());
    std::getline(cells, cell, ',');
    CHECK(cell == row["inhibitor"].get<std::string>());
    for (const char* key : {"ready_mean", "ready_std", "fp", "tp", "hf"}) {
      std::getline(cells, cell, ',');
      CHECK(std::stod(cell) == doctest::Approx(row[key].get<double>()).epsilon(1e-15));
    }
    std::getline(cells, cell, ',');
    CHECK(std::stoi(cell) == row["n"].get<int>());
    ++i;
  }
  CHECK(i == table.rows.size());

  // round-trip through the JSON form
  const auto back = table_from_json_text(json_text);
  CHECK(render_report(back, ReportFormat::csv) == csv);

  CHECK_THROWS_AS(report_format_from_string("yaml"), ConfigError);
  CHECK(!render_report(table, ReportFormat::text).empty());
}
