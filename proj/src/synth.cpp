#include "betagate/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace betagate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// tail below exp(-8) of the peak counts as over
int64_t exp_event_end(int64_t start, double plateau_s, double decay_s, double rate) {
  return start + static_cast<int64_t>(std::llround((plateau_s + 8.0 * decay_s) * rate));
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string("synth.") + name + " must lie in [0, 1]");
  }
}

void check_non_negative(double v, const char* name) {
  if (!(v >= 0.0)) throw ConfigError(std::string("synth.") + name + " must be >= 0");
}

}  // namespace

void SynthConfig::validate(const ChannelLayout& layout, double stop_s) const {
  check_non_negative(noise_amplitude_uv, "noise_amplitude_uv");
  check_non_negative(idle_beta_fraction, "idle_beta_fraction");
  check_non_negative(spontaneous_rate_hz, "spontaneous_rate_hz");
  check_non_negative(spontaneous_fraction, "spontaneous_fraction");
  check_non_negative(rebound_amplitude_uv, "rebound_amplitude_uv");
  check_non_negative(restlessness_burst.amplitude_uv, "restlessness_burst.amplitude_uv");
  check_probability(restlessness_probability, "restlessness_probability");
  check_probability(rebound_probability_real, "rebound_probability_real");
  check_probability(rebound_probability_imaginary, "rebound_probability_imaginary");
  check_probability(common_mode_fraction, "common_mode_fraction");
  if (!(erd_depth >= 0.0 && erd_depth <= 1.0)) {
    throw ConfigError("synth.erd_depth must lie in [0, 1]");
  }
  if (!(beta_carrier_hz > 0.0 && beta_carrier_hz < layout.sample_rate / 2.0)) {
    throw ConfigError("synth.beta_carrier_hz must lie in (0, rate/2)");
  }
  if (restlessness_onset_min_s < 0.0 || restlessness_onset_max_s < restlessness_onset_min_s) {
    throw ConfigError("synth restlessness onset window must satisfy 0 <= min <= max");
  }
  if (channel_gains.size() != layout.size()) {
    throw ConfigError("synth.channel_gains must list one gain per channel (" +
                      std::to_string(layout.size()) + ")");
  }
  const size_t cz = layout.index_of("Cz");
  for (size_t i = 0; i < channel_gains.size(); ++i) {
    check_non_negative(channel_gains[i], "channel_gains");
    if (i != cz && channel_gains[i] >= channel_gains[cz]) {
      throw ConfigError("synth.channel_gains must give Cz the largest beta-event gain");
    }
  }
  const bool want_rebound = rebound_probability_real > 0.0 || rebound_probability_imaginary > 0.0;
  if (want_rebound && rebound_latency_s + rebound_duration_s > stop_s) {
    throw ConfigError("synth rebound_latency_s + rebound_duration_s must fit the Stop phase (" +
                      std::to_string(stop_s) + " s) when rebounds are enabled");
  }
}

SynthSource::SynthSource(ChannelLayout layout, SynthConfig config, uint64_t seed)
    : layout_(std::move(layout)),
      cfg_(std::move(config)),
      seed_(seed),
      pink_common_(substream_seed(seed, "noise/common")),
      white_common_(substream_seed(seed, "noise/common/white")),
      spontaneous_rng_(substream_seed(seed, "spontaneous")) {
  layout_.validate();
  for (size_t c = 0; c < layout_.size(); ++c) {
    pink_.emplace_back(substream_seed(seed, "noise/" + std::to_string(c)));
    white_.emplace_back(substream_seed(seed, "noise/" + std::to_string(c) + "/white"));
  }
  Rng idle(substream_seed(seed, "idle"));
  idle_phase_ = idle.uniform(0.0, kTwoPi);
  // first spontaneous candidate
  next_spontaneous_phase_ = spontaneous_rng_.uniform(0.0, kTwoPi);
  next_spontaneous_sample_ = cfg_.spontaneous_rate_hz > 0.0
      ? static_cast<int64_t>(spontaneous_rng_.exponential(cfg_.spontaneous_rate_hz) *
                             layout_.sample_rate)
      : std::numeric_limits<int64_t>::max();
}

void SynthSource::on_trial_start(const TrialContext& ctx) {
  Rng rng(substream_seed(seed_, "trial/" + std::to_string(ctx.session_index) + "/" +
                                    std::to_string(ctx.trial_index)));
  const bool restless = rng.bernoulli(cfg_.restlessness_probability);
  const double onset_s = rng.uniform(cfg_.restlessness_onset_min_s, cfg_.restlessness_onset_max_s);
  const double restless_phase = rng.uniform(0.0, kTwoPi);
  const double p_rebound = ctx.task == TaskType::real_movement
                               ? cfg_.rebound_probability_real
                               : cfg_.rebound_probability_imaginary;
  rebound_pending_flag_ = rng.bernoulli(p_rebound);
  rebound_phase_draw_ = rng.uniform(0.0, kTwoPi);

  if (restless && cfg_.restlessness_burst.amplitude_uv > 0.0) {
    Event ev;
    ev.start_sample =
        ctx.ready_onset_sample + static_cast<int64_t>(std::llround(onset_s * layout_.sample_rate));
    ev.amplitude = cfg_.restlessness_burst.amplitude_uv;
    ev.plateau_s = cfg_.restlessness_burst.duration_s;
    ev.decay_s = cfg_.restlessness_burst.decay_s;
    ev.carrier_phase = restless_phase;
    ev.end_sample =
        exp_event_end(ev.start_sample, ev.plateau_s, ev.decay_s, layout_.sample_rate);
    active_.push_back(ev);
  }
}

void SynthSource::on_phase_change(TrialPhase phase, int64_t start_sample) {
  phase_ = phase;
  erd_active_ = phase == TrialPhase::move;
  idle_bursts_allowed_ = phase == TrialPhase::baseline || phase == TrialPhase::ready ||
                         phase == TrialPhase::inter_trial;
  if (phase == TrialPhase::stop && rebound_pending_flag_) {
    rebound_pending_flag_ = false;
    if (cfg_.rebound_amplitude_uv > 0.0 && cfg_.rebound_duration_s > 0.0) {
      Event ev;
      ev.start_sample = start_sample +
                        static_cast<int64_t>(std::llround(cfg_.rebound_latency_s * layout_.sample_rate));
      ev.amplitude = cfg_.rebound_amplitude_uv;
      ev.plateau_s = cfg_.rebound_duration_s;
      ev.carrier_phase = rebound_phase_draw_;
      ev.raised_cosine = true;
      ev.end_sample = ev.start_sample +
                      static_cast<int64_t>(std::llround(cfg_.rebound_duration_s * layout_.sample_rate));
      active_.push_back(ev);
    }
  }
}

void SynthSource::spawn_due_spontaneous() {
  while (next_spontaneous_sample_ <= sample_) {
    if (idle_bursts_allowed_ && cfg_.spontaneous_fraction > 0.0 &&
        cfg_.noise_amplitude_uv > 0.0) {
      Event ev;
      ev.start_sample = next_spontaneous_sample_;
      ev.amplitude = cfg_.spontaneous_fraction * cfg_.noise_amplitude_uv;
      ev.plateau_s = cfg_.spontaneous_duration_s;
      ev.decay_s = cfg_.spontaneous_decay_s;
      ev.carrier_phase = next_spontaneous_phase_;
      ev.end_sample =
          exp_event_end(ev.start_sample, ev.plateau_s, ev.decay_s, layout_.sample_rate);
      active_.push_back(ev);
    }
    next_spontaneous_phase_ = spontaneous_rng_.uniform(0.0, kTwoPi);
    next_spontaneous_sample_ += static_cast<int64_t>(
        std::llround(spontaneous_rng_.exponential(cfg_.spontaneous_rate_hz) *
                     layout_.sample_rate) + 1);
  }
}

double SynthSource::beta_source(double t_s) {
  double value = 0.0;
  const double idle_amp = cfg_.idle_beta_fraction * cfg_.noise_amplitude_uv *
                          (erd_active_ ? 1.0 - cfg_.erd_depth : 1.0);
  if (idle_amp > 0.0) {
    value += idle_amp * std::sin(kTwoPi * cfg_.beta_carrier_hz * t_s + idle_phase_);
  }
  for (size_t i = 0; i < active_.size();) {
    Event& ev = active_[i];
    if (sample_ >= ev.end_sample) {
      active_[i] = active_.back();
      active_.pop_back();
      continue;
    }
    if (sample_ >= ev.start_sample) {
      const double tau = static_cast<double>(sample_ - ev.start_sample) / layout_.sample_rate;
      double env;
      if (ev.raised_cosine) {
        env = ev.amplitude * 0.5 * (1.0 - std::cos(kTwoPi * tau / ev.plateau_s));
      } else if (tau < ev.plateau_s) {
        env = ev.amplitude;
      } else {
        env = ev.amplitude * std::exp(-(tau - ev.plateau_s) / ev.decay_s);
      }
      value += env * std::sin(kTwoPi * cfg_.beta_carrier_hz * tau + ev.carrier_phase);
    }
    ++i;
  }
  return value;
}

bool SynthSource::next(Frame& out) {
  out.resize(layout_.size());
  if (cfg_.spontaneous_rate_hz > 0.0) spawn_due_spontaneous();
  const double t = static_cast<double>(sample_) / layout_.sample_rate;
  const double beta = beta_source(t);
  const double cm_w = cfg_.common_mode_fraction;
  const bool pink = cfg_.noise_spectrum == NoiseSpectrum::pink;
  const double common = pink ? pink_common_.next() : white_common_.gauss();
  for (size_t c = 0; c < layout_.size(); ++c) {
    const double ind = pink ? pink_[c].next() : white_[c].gauss();
    out[c] = cfg_.noise_amplitude_uv * ((1.0 - cm_w) * ind + cm_w * common) +
             cfg_.channel_gains[c] * beta;
  }
  ++sample_;
  return true;
}

MultiChannelRecording generate_rest(const ChannelLayout& layout, const SynthConfig& config,
                                    uint64_t seed, double duration_s) {
  if (!(duration_s > 0.0)) throw ConfigError("rest duration must be positive");
  config.validate(layout, std::numeric_limits<double>::infinity());
  SynthSource src(layout, config, seed);
  MultiChannelRecording rec{layout, {}, 0.0};
  const auto n = static_cast<int64_t>(std::llround(duration_s * layout.sample_rate));
  rec.frames.reserve(static_cast<size_t>(n));
  Frame f;
  for (int64_t i = 0; i < n; ++i) {
    src.next(f);
    rec.frames.push_back(f);
  }
  return rec;
}

MultiChannelRecording generate_trial(const ChannelLayout& layout, const SynthConfig& config,
                                     uint64_t seed, const TrialRecord& skeleton,
                                     double preroll_s) {
  if (!skeleton.complete()) throw ConfigError("generate_trial needs complete phase bounds");
  config.validate(layout, skeleton.end_s(TrialPhase::stop) - skeleton.start_s(TrialPhase::stop));
  SynthSource src(layout, config, seed);
  const auto shift = static_cast<int64_t>(std::llround(preroll_s * layout.sample_rate));

  struct Change {
    int64_t at;
    TrialPhase phase;
  };
  const std::vector<Change> changes = {
      {shift + skeleton.ready.start_sample, TrialPhase::ready},
      {shift + skeleton.steady.start_sample, TrialPhase::steady},
      {shift + skeleton.move.start_sample, TrialPhase::move},
      {shift + skeleton.stop.start_sample, TrialPhase::stop},
      {shift + skeleton.inter_trial.start_sample, TrialPhase::inter_trial},
  };
  const int64_t total = shift + skeleton.inter_trial.end_sample;

  MultiChannelRecording rec{layout, {}, 0.0};
  rec.frames.reserve(static_cast<size_t>(total));
  Frame f;
  size_t next_change = 0;
  for (int64_t i = 0; i < total; ++i) {
    if (next_change < changes.size() && i == changes[next_change].at) {
      if (changes[next_change].phase == TrialPhase::ready) {
        TrialContext ctx{skeleton.session_index, skeleton.trial_index, skeleton.task,
                         skeleton.inhibitor_enabled, i};
        src.on_trial_start(ctx);
      }
      src.on_phase_change(changes[next_change].phase, i);
      ++next_change;
    }
    src.next(f);
    rec.frames.push_back(f);
  }
  return rec;
}

}  // namespace betagate
