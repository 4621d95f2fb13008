#include "betagate/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "betagate/artifacts.hpp"
#include "betagate/recording_io.hpp"

namespace betagate {

namespace {

namespace fs = std::filesystem;

// Collects outputs and writes them only when the whole command has
// succeeded, via temp-file + rename, so failures leave nothing behind.
class ArtifactWriter {
 public:
  void add(fs::path path, std::string content) {
    staged_.emplace_back(std::move(path), std::move(content));
  }

  void commit() {
    std::vector<fs::path> temps;
    try {
      for (const auto& [path, content] : staged_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary);
          if (!out) throw EngineError("cannot write '" + tmp.string() + "'");
          out << content;
          if (!out) throw EngineError("write failed for '" + tmp.string() + "'");
        }
        temps.push_back(tmp);
      }
      for (size_t i = 0; i < staged_.size(); ++i) {
        fs::rename(temps[i], staged_[i].first);
      }
    } catch (...) {
      for (const auto& t : temps) {
        std::error_code ec;
        fs::remove(t, ec);
      }
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> staged_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Sleeps the simulated clock up to wall time. Demonstration only; the frame
// content is untouched.
class PacingSource : public FrameSource {
 public:
  PacingSource(FrameSource& inner, double sample_rate)
      : inner_(inner), rate_(sample_rate), start_(std::chrono::steady_clock::now()) {}

  bool next(Frame& out) override {
    if (count_ % 512 == 0 && count_ > 0) {
      const auto due = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(count_ / rate_));
      std::this_thread::sleep_until(due);
    }
    ++count_;
    return inner_.next(out);
  }
  void on_trial_start(const TrialContext& ctx) override { inner_.on_trial_start(ctx); }
  void on_phase_change(TrialPhase p, int64_t s) override { inner_.on_phase_change(p, s); }

 private:
  FrameSource& inner_;
  double rate_;
  int64_t count_ = 0;
  std::chrono::steady_clock::time_point start_;
};

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "text";
  uint64_t seed = 0;
  bool seed_set = false;
  bool realtime = false;
  std::string run_id;
};

EngineConfig resolve_config(const CommonOpts& opts) {
  EngineConfig cfg = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
  if (opts.seed_set) cfg.seed = opts.seed;
  cfg.validate();
  return cfg;
}

std::string default_run_id(const EngineConfig& cfg) {
  return "run-" + std::to_string(cfg.seed);
}

// CS over the leading baseline window of a recording.
CalibrationResult calibrate_recording(const EngineConfig& cfg, const MultiChannelRecording& rec) {
  const double need_s = cfg.params.protocol.baseline_s;
  const auto need = static_cast<size_t>(std::llround(need_s * cfg.params.layout.sample_rate));
  if (rec.n_samples() < need) {
    throw CalibrationError("insufficient baseline: recording is " +
                           std::to_string(rec.duration()) + " s, need " + std::to_string(need_s) +
                           " s");
  }
  MultiChannelRecording head{rec.layout, {rec.frames.begin(), rec.frames.begin() +
                                                                  static_cast<std::ptrdiff_t>(need)},
                             rec.start_time};
  const ControlSignal cs = control_signal(head, cfg.params.pipeline);
  CalibrationResult cal;
  cal.stats = compute_baseline(cs.series);
  cal.thresholds = compute_thresholds(cal.stats, cfg.params.thresholds);
  return cal;
}

void stage_table(ArtifactWriter& w, const fs::path& dir, const PerformanceTable& table,
                 const ArtifactMeta& meta) {
  w.add(dir / "table.json", table_artifact_to_json(table, meta));
  w.add(dir / "table.csv", render_report(table, ReportFormat::csv));
  w.add(dir / "table.txt", render_report(table, ReportFormat::text));
}

int cmd_run(const CommonOpts& opts, const std::string& input, bool with_table) {
  const EngineConfig cfg = resolve_config(opts);
  const ArtifactMeta meta{cfg.fingerprint(), cfg.seed};
  const std::string run_id = opts.run_id.empty() ? default_run_id(cfg) : opts.run_id;
  const ExperimentPlan plan = build_experiment_plan(cfg.params.plan, cfg.seed);

  std::unique_ptr<MultiChannelRecording> replay;
  std::unique_ptr<FrameSource> source;
  if (input.empty()) {
    source = std::make_unique<SynthSource>(cfg.params.layout, cfg.synth, cfg.seed);
  } else {
    replay = std::make_unique<MultiChannelRecording>(load_recording(input));
    if (replay->layout.names != cfg.params.layout.names) {
      throw ConfigError("recording channels do not match the configured layout");
    }
    source = std::make_unique<RecordingSource>(*replay);
  }
  std::unique_ptr<PacingSource> paced;
  FrameSource* src = source.get();
  if (opts.realtime) {
    paced = std::make_unique<PacingSource>(*source, cfg.params.layout.sample_rate);
    src = paced.get();
  }

  const ExperimentResult result =
      run_full_experiment(cfg.params, plan, *src, run_id, /*record_frames=*/true);

  ArtifactWriter w;
  const fs::path dir(opts.out_dir);
  w.add(dir / "config.json", cfg.to_json_text());
  w.add(dir / "plan.json", plan_to_json(plan, meta));
  w.add(dir / "calibration.json", calibration_to_json(result.calibration, meta));
  w.add(dir / "recording.csv", recording_to_csv(result.recording));
  w.add(dir / "trials.jsonl", trials_to_jsonl(result.records, &result.outcomes, meta));
  w.add(dir / "events.jsonl", events_to_jsonl(result.events, meta));
  if (with_table) stage_table(w, dir, result.table, meta);
  w.commit();

  if (with_table) {
    std::cout << render_report(result.table, report_format_from_string(opts.format));
  } else {
    std::cout << "simulated " << result.records.size() << " trials, "
              << result.recording.n_samples() << " frames -> " << opts.out_dir << "\n";
  }
  return 0;
}

int cmd_calibrate(const CommonOpts& opts, const std::string& input, const std::string& out_path) {
  const EngineConfig cfg = resolve_config(opts);
  const ArtifactMeta meta{cfg.fingerprint(), cfg.seed};
  const MultiChannelRecording rec = load_recording(input);
  const CalibrationResult cal = calibrate_recording(cfg, rec);
  ArtifactWriter w;
  w.add(out_path, calibration_to_json(cal, meta));
  w.commit();
  std::cout << "baseline mean " << cal.stats.mean << " uV^2, std " << cal.stats.std
            << " uV^2 over " << cal.stats.n_samples << " values; th1 " << cal.thresholds.th1
            << ", th2 " << cal.thresholds.th2 << "\n";
  return 0;
}

int cmd_score(const CommonOpts& opts, const std::string& recording_path,
              const std::string& calibration_path, const std::string& trials_path) {
  const EngineConfig cfg = resolve_config(opts);
  const ArtifactMeta meta{cfg.fingerprint(), cfg.seed};
  const std::string run_id = opts.run_id.empty() ? default_run_id(cfg) : opts.run_id;

  const MultiChannelRecording rec = load_recording(recording_path);
  const CalibrationResult cal = calibration_from_json_text(read_file(calibration_path));
  const std::vector<TrialRecord> records = trials_from_jsonl_text(read_file(trials_path));
  if (records.empty()) throw ScoringError("trial log contains no trials");

  const PerformanceTable table =
      score_recording(cfg.params, rec, cal.thresholds, records, run_id);
  ArtifactWriter w;
  stage_table(w, fs::path(opts.out_dir), table, meta);
  w.commit();
  std::cout << render_report(table, report_format_from_string(opts.format));
  return 0;
}

int cmd_report(const CommonOpts& opts, const std::vector<std::string>& table_paths,
               const std::string& out_path) {
  std::vector<PerformanceTable> tables;
  tables.reserve(table_paths.size());
  for (const auto& p : table_paths) tables.push_back(table_from_artifact_text(read_file(p)));
  const PerformanceTable merged = tables.size() == 1 ? tables[0] : merge_tables(tables);
  const std::string rendered = render_report(merged, report_format_from_string(opts.format));
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    ArtifactWriter w;
    w.add(out_path, rendered);
    w.commit();
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"beta-band readiness gate: standby-gated motor BCI experiment engine"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--config", opts.config_path, "config JSON path (defaults are built in)");
    cmd->add_option("--seed", opts.seed, "master seed (overrides the config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    if (with_format) {
      cmd->add_option("--format", opts.format, "stdout table format: csv|json|text");
    }
  };

  std::string input, recording_path, calibration_path, trials_path;
  std::string calibration_out = "calibration.json";
  std::string report_out;
  std::vector<std::string> table_paths;

  CLI::App* calibrate = app.add_subcommand("calibrate", "baseline recording -> calibration JSON");
  add_common(calibrate, false);
  calibrate->add_option("--input", input, "baseline recording CSV")->required();
  calibrate->add_option("--out", calibration_out, "calibration JSON output path");

  CLI::App* simulate =
      app.add_subcommand("simulate", "synthesize an experiment and persist it for replay");
  add_common(simulate, false);
  simulate->add_flag("--realtime", opts.realtime, "pace frames against the wall clock");

  CLI::App* run = app.add_subcommand("run", "end-to-end experiment with scoring");
  add_common(run);
  run->add_option("--input", input, "replay a recording CSV instead of synthesizing");
  run->add_flag("--realtime", opts.realtime, "pace frames against the wall clock");
  run->add_option("--run-id", opts.run_id, "row label in the report (default run-<seed>)");

  CLI::App* score = app.add_subcommand("score", "recording + calibration + trial log -> table");
  add_common(score);
  score->add_option("--recording", recording_path, "recording CSV")->required();
  score->add_option("--calibration", calibration_path, "calibration JSON")->required();
  score->add_option("--trials", trials_path, "trial log JSONL")->required();
  score->add_option("--run-id", opts.run_id, "row label in the report");

  CLI::App* report = app.add_subcommand("report", "re-render or merge table JSON artifacts");
  report->add_option("--table", table_paths, "table.json artifact(s)")->required();
  report->add_option("--format", opts.format, "csv|json|text");
  report->add_option("--out", report_out, "write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(opts, input, calibration_out);
    if (simulate->parsed()) return cmd_run(opts, "", /*with_table=*/false);
    if (run->parsed()) return cmd_run(opts, input, /*with_table=*/true);
    if (score->parsed()) return cmd_score(opts, recording_path, calibration_path, trials_path);
    if (report->parsed()) return cmd_report(opts, table_paths, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace betagate
