#include <doctest.h>

#include <cmath>

#include "betagate/experiment.hpp"
#include "betagate/rng.hpp"
#include "helpers.hpp"

using namespace betagate;
using namespace betagate::testing;

// CS statistics of generate_rest(seed 7, 25 s) with default knobs, measured
// once and frozen as regression values.
constexpr double kRestSeed7Mean = 61.6184197643;
constexpr double kRestSeed7Std = 69.5996680904;

namespace {

double mean_square(const std::vector<double>& v, size_t lo, size_t hi) {
  double s = 0.0;
  for (size_t i = lo; i < hi; ++i) s += v[i] * v[i];
  return s / static_cast<double>(hi - lo);
}

TrialRecord off_skeleton() {
  TrialRecord r;
  r.sample_rate = 512.0;
  auto set = [](PhaseBounds& b, double s, double e) {
    b.start_sample = static_cast<int64_t>(s * 512.0);
    b.end_sample = static_cast<int64_t>(e * 512.0);
  };
  set(r.ready, 0.0, 3.0);
  set(r.steady, 3.0, 4.0);
  set(r.move, 4.0, 7.0);
  set(r.stop, 7.0, 10.0);
  set(r.inter_trial, 10.0, 14.0);
  r.ready_duration = 3.0;
  return r;
}

}  // namespace

TEST_CASE("rest generation is deterministic in the seed") {
  const auto layout = ChannelLayout::standard();
  const auto a = generate_rest(layout, SynthConfig{}, 5, 2.0);
  const auto b = generate_rest(layout, SynthConfig{}, 5, 2.0);
  REQUIRE(a.frames.size() == b.frames.size());
  CHECK(a.frames == b.frames);
  const auto c = generate_rest(layout, SynthConfig{}, 6, 2.0);
  CHECK(a.frames != c.frames);
}

TEST_CASE("zero noise amplitude silences the rest background entirely") {
  SynthConfig cfg;
  cfg.noise_amplitude_uv = 0.0;
  const auto rec = generate_rest(ChannelLayout::standard(), cfg, 5, 3.0);
  for (const auto& f : rec.frames) {
    for (double v : f) CHECK(v == 0.0);
  }
}

TEST_CASE("rest CS for seed 7 has positive spread; values are frozen") {
  const auto rec = generate_rest(ChannelLayout::standard(), SynthConfig{}, 7, 25.0);
  const auto stats = compute_baseline(control_signal(rec).series);
  CHECK(stats.mean > 0.0);
  CHECK(stats.std > 0.0);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "mean %.12g std %.12g", stats.mean, stats.std);
  MESSAGE(buf);
  CHECK(stats.mean == doctest::Approx(kRestSeed7Mean).epsilon(1e-9));
  CHECK(stats.std == doctest::Approx(kRestSeed7Std).epsilon(1e-9));
}

TEST_CASE("beta events are Cz-focal and survive the Laplacian") {
  // events only: no background at all
  SynthConfig cfg;
  cfg.noise_amplitude_uv = 0.0;
  cfg.rebound_probability_real = 1.0;
  cfg.restlessness_probability = 0.0;
  const auto rec = generate_trial(ChannelLayout::standard(), cfg, 13, off_skeleton());

  // the rebound occupies Stop start + latency for rebound_duration
  const auto lo = static_cast<size_t>((7.0 + cfg.rebound_latency_s) * 512.0);
  const auto hi = lo + static_cast<size_t>(cfg.rebound_duration_s * 512.0);
  std::vector<double> cz, lap;
  const LaplacianFilter filt = LaplacianFilter::cz(rec.layout);
  for (const auto& f : rec.frames) {
    cz.push_back(f[0]);
    lap.push_back(filt.apply(f));
  }
  const double before = mean_square(cz, lo, hi);
  const double after = mean_square(lap, lo, hi);
  CHECK(before > 0.0);
  CHECK(after >= 0.5 * before);
}

TEST_CASE("rebound energy concentrates in the beta band") {
  SynthConfig cfg;
  cfg.noise_amplitude_uv = 0.0;
  cfg.rebound_probability_real = 1.0;
  cfg.restlessness_probability = 0.0;
  const auto rec = generate_trial(ChannelLayout::standard(), cfg, 13, off_skeleton());
  ScalarStream cz{{}, 512.0, 0.0};
  for (const auto& f : rec.frames) cz.values.push_back(f[0]);
  const auto beta = bandpass(cz, 16.0, 24.0);

  const auto lo = static_cast<size_t>((7.0 + cfg.rebound_latency_s) * 512.0);
  const auto hi = lo + static_cast<size_t>(cfg.rebound_duration_s * 512.0);
  const double total = mean_square(cz.values, lo, hi);
  const double in_band = mean_square(beta.values, lo, hi);
  CHECK(in_band >= 0.8 * total);
}

TEST_CASE("full ERD on a nearly pure beta background nulls the Move-phase CS") {
  SynthConfig cfg;
  cfg.noise_amplitude_uv = 1.0;
  cfg.idle_beta_fraction = 50.0;  // background is ~pure idle beta
  cfg.spontaneous_rate_hz = 0.0;
  cfg.restlessness_probability = 0.0;
  cfg.rebound_probability_real = 0.0;
  cfg.erd_depth = 1.0;
  const auto rec = generate_trial(ChannelLayout::standard(), cfg, 19, off_skeleton(), 2.0);
  const auto cs = control_signal(rec);

  // compare Move-phase CS (ERD active; allow the 1 s window plus smoothing
  // to flush the pre-Move content) against the Ready-phase level
  const auto& s = cs.series;
  const auto [ready_lo, ready_hi] = emission_index_range(s.first_emit_time, s.hop, 3.0, 5.0);
  const auto [move_lo, move_hi] = emission_index_range(s.first_emit_time, s.hop, 7.5, 9.0);
  double ready_level = 0.0;
  for (auto k = ready_lo; k < ready_hi; ++k) {
    ready_level += s.values[static_cast<size_t>(k)];
  }
  ready_level /= static_cast<double>(ready_hi - ready_lo);
  double move_peak = 0.0;
  for (auto k = move_lo; k < move_hi; ++k) {
    move_peak = std::max(move_peak, s.values[static_cast<size_t>(k)]);
  }
  CHECK(ready_level > 100.0);
  CHECK(move_peak < 0.01 * ready_level);
}

TEST_CASE("no rebound and no background means no Stop-phase detection at any threshold") {
  SynthConfig cfg;
  cfg.noise_amplitude_uv = 0.0;
  cfg.rebound_probability_real = 0.0;
  cfg.rebound_probability_imaginary = 0.0;
  cfg.restlessness_probability = 0.0;
  const auto rec = generate_trial(ChannelLayout::standard(), cfg, 23, off_skeleton(), 2.0);
  const auto cs = control_signal(rec);
  auto skeleton = off_skeleton();
  // shift bounds by the 2 s preroll
  for (PhaseBounds* b :
       {&skeleton.ready, &skeleton.steady, &skeleton.move, &skeleton.stop, &skeleton.inter_trial}) {
    b->start_sample += 1024;
    b->end_sample += 1024;
  }
  const auto outcome = score_trial(cs, Thresholds{1.0, 0.5}, skeleton);
  CHECK(!outcome.tp);
  CHECK(!outcome.fp);
}

TEST_CASE("clean signal end to end: every trial is a hit, none a false alarm") {
  SynthConfig cfg;
  cfg.restlessness_probability = 0.0;
  cfg.rebound_probability_real = 1.0;
  cfg.rebound_probability_imaginary = 1.0;
  PlanParams shape;
  shape.sessions_per_task = 2;
  shape.trials_per_session = 5;
  EngineParams params;
  params.plan = shape;
  const auto plan = build_experiment_plan(shape, 29);
  SynthSource src(ChannelLayout::standard(), cfg, 29);
  const auto result = run_full_experiment(params, plan, src, "clean");
  REQUIRE(result.outcomes.size() == 20);
  for (const auto& o : result.outcomes) {
    CHECK(o.tp);
    CHECK(!o.fp);
  }
}

TEST_CASE("restless trials wait out the gate, calm trials release early") {
  // inhibitor-on sessions only; split trials by the generator's own
  // restlessness draw, replayed from the trial substream
  SynthConfig cfg;
  EngineParams params;
  std::vector<double> restless_ready, calm_ready;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    ExperimentPlan plan;
    plan.rng_seed = seed;
    plan.sessions.assign(2, SessionPlan{TaskType::real_movement, true, 10});
    SynthSource src(ChannelLayout::standard(), cfg, seed);
    const auto result = run_full_experiment(params, plan, src, "gated");
    for (const auto& r : result.records) {
      Rng trial_rng(substream_seed(seed, "trial/" + std::to_string(r.session_index) + "/" +
                                             std::to_string(r.trial_index)));
      const bool restless = trial_rng.bernoulli(cfg.restlessness_probability);
      (restless ? restless_ready : calm_ready).push_back(r.ready_duration);
    }
  }
  REQUIRE(!restless_ready.empty());
  REQUIRE(!calm_ready.empty());
  const double rm = std::accumulate(restless_ready.begin(), restless_ready.end(), 0.0) /
                    static_cast<double>(restless_ready.size());
  const double cm = std::accumulate(calm_ready.begin(), calm_ready.end(), 0.0) /
                    static_cast<double>(calm_ready.size());
  CHECK(rm > 3.0);
  CHECK(cm < 3.0);
}

TEST_CASE("synth config validation") {
  const auto layout = ChannelLayout::standard();
  SynthConfig cfg;
  cfg.restlessness_probability = 1.5;
  CHECK_THROWS_AS(cfg.validate(layout, 3.0), ConfigError);

  cfg = SynthConfig{};
  cfg.channel_gains = {0.2, 1.0, 0.2, 0.2, 0.2};  // Cz must dominate
  CHECK_THROWS_AS(cfg.validate(layout, 3.0), ConfigError);

  cfg = SynthConfig{};
  cfg.rebound_latency_s = 2.0;
  cfg.rebound_duration_s = 1.5;  // does not fit a 3 s Stop
  CHECK_THROWS_AS(cfg.validate(layout, 3.0), ConfigError);
  cfg.rebound_probability_real = 0.0;
  cfg.rebound_probability_imaginary = 0.0;  // no rebound requested: fits
  CHECK_NOTHROW(cfg.validate(layout, 3.0));
}
