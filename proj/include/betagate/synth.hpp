#pragma once

#include "betagate/protocol.hpp"
#include "betagate/rng.hpp"

namespace betagate {

enum class NoiseSpectrum { white, pink };

struct BurstShape {
  double amplitude_uv = 0.0;
  double duration_s = 0.0;  // plateau length; the envelope then decays
  double decay_s = 0.1;     // exponential tail time constant
};

// Phenomenological generator knobs. Background texture (broadband noise,
// idle beta rhythm, spontaneous short beta bursts) scales with
// noise_amplitude_uv; trial events (restlessness, rebound) are absolute.
struct SynthConfig {
  double noise_amplitude_uv = 12.0;
  NoiseSpectrum noise_spectrum = NoiseSpectrum::pink;
  double common_mode_fraction = 0.3;  // share of noise common to all channels

  double beta_carrier_hz = 20.0;

  // rest texture, relative to noise_amplitude_uv
  double idle_beta_fraction = 0.12;
  double spontaneous_rate_hz = 0.25;        // idle-phase beta bursts
  double spontaneous_fraction = 3.5;        // burst amplitude / noise amplitude
  double spontaneous_duration_s = 0.25;
  double spontaneous_decay_s = 0.08;

  // movement-related dynamics
  double erd_depth = 0.6;  // idle-beta attenuation during Move
  double rebound_amplitude_uv = 70.0;
  double rebound_latency_s = 0.5;    // after Stop onset
  double rebound_duration_s = 1.5;
  double rebound_probability_real = 0.97;
  double rebound_probability_imaginary = 0.55;

  // pre-trial restlessness the gate should wait out
  double restlessness_probability = 0.4;
  BurstShape restlessness_burst{48.0, 4.5, 0.3};
  double restlessness_onset_min_s = 0.0;   // relative to Ready onset
  double restlessness_onset_max_s = 0.65;

  // per-channel gain of every beta-band source; Cz must be largest so focal
  // events survive the Laplacian
  std::vector<double> channel_gains = {1.0, 0.25, 0.25, 0.2, 0.2};

  void validate(const ChannelLayout& layout, double stop_s) const;
};

// Streaming generator. Pure function of (layout, config, seed, notification
// sequence); the RNG advances only as frames are pulled, so gate-dependent
// Ready durations compose with lazily decided trial content.
class SynthSource : public FrameSource {
 public:
  SynthSource(ChannelLayout layout, SynthConfig config, uint64_t seed);

  bool next(Frame& out) override;
  void on_trial_start(const TrialContext& ctx) override;
  void on_phase_change(TrialPhase phase, int64_t start_sample) override;

  int64_t generated() const { return sample_; }

 private:
  struct Event {
    int64_t start_sample = 0;
    double amplitude = 0.0;
    double plateau_s = 0.0;
    double decay_s = 0.1;
    double carrier_phase = 0.0;
    bool raised_cosine = false;  // rebound bump instead of plateau+decay
    int64_t end_sample = 0;
  };

  double beta_source(double t_s);
  void spawn_due_spontaneous();

  ChannelLayout layout_;
  SynthConfig cfg_;
  uint64_t seed_;

  std::vector<PinkNoise> pink_;
  PinkNoise pink_common_;
  std::vector<Rng> white_;
  Rng white_common_;
  Rng spontaneous_rng_;
  double idle_phase_;

  int64_t sample_ = 0;
  TrialPhase phase_ = TrialPhase::baseline;
  bool erd_active_ = false;
  bool idle_bursts_allowed_ = true;

  int64_t next_spontaneous_sample_ = 0;
  double next_spontaneous_phase_ = 0.0;

  std::vector<Event> active_;
  std::optional<Event> pending_rebound_;  // armed at trial start, placed at Stop
  bool rebound_pending_flag_ = false;
  double rebound_phase_draw_ = 0.0;
};

// Rest-state recording: noise, idle beta and spontaneous bursts only.
MultiChannelRecording generate_rest(const ChannelLayout& layout, const SynthConfig& config,
                                    uint64_t seed, double duration_s);

// One trial with known phase boundaries (inhibitor-off layouts), preceded by
// preroll_s of rest so filters and gate windows have history.
MultiChannelRecording generate_trial(const ChannelLayout& layout, const SynthConfig& config,
                                     uint64_t seed, const TrialRecord& skeleton,
                                     double preroll_s = 0.0);

}  // namespace betagate
