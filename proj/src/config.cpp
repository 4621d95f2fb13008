#include "betagate/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace betagate {

namespace {

using nlohmann::json;

// Strict reader: every visited key is recorded, leftovers are reported as a
// group so a typo surfaces with its full path.
class StrictReader {
 public:
  StrictReader(const json& j, std::string prefix, std::vector<std::string>& unknown)
      : j_(j), prefix_(std::move(prefix)), unknown_(unknown) {
    if (!j_.is_object()) {
      throw ConfigError("config section '" + (prefix_.empty() ? "<root>" : prefix_) +
                        "' must be a JSON object");
    }
  }

  ~StrictReader() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) unknown_.push_back(prefix_ + it.key());
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config field '" + prefix_ + key + "' has the wrong type");
    }
  }

  const json* section(const std::string& key) {
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& unknown_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

json synth_to_json(const SynthConfig& s) {
  return json{
      {"noise_amplitude_uv", s.noise_amplitude_uv},
      {"noise_spectrum", s.noise_spectrum == NoiseSpectrum::pink ? "pink" : "white"},
      {"common_mode_fraction", s.common_mode_fraction},
      {"beta_carrier_hz", s.beta_carrier_hz},
      {"idle_beta_fraction", s.idle_beta_fraction},
      {"spontaneous_rate_hz", s.spontaneous_rate_hz},
      {"spontaneous_fraction", s.spontaneous_fraction},
      {"spontaneous_duration_s", s.spontaneous_duration_s},
      {"spontaneous_decay_s", s.spontaneous_decay_s},
      {"erd_depth", s.erd_depth},
      {"rebound_amplitude_uv", s.rebound_amplitude_uv},
      {"rebound_latency_s", s.rebound_latency_s},
      {"rebound_duration_s", s.rebound_duration_s},
      {"rebound_probability_real", s.rebound_probability_real},
      {"rebound_probability_imaginary", s.rebound_probability_imaginary},
      {"restlessness_probability", s.restlessness_probability},
      {"restlessness_burst",
       {{"amplitude_uv", s.restlessness_burst.amplitude_uv},
        {"duration_s", s.restlessness_burst.duration_s},
        {"decay_s", s.restlessness_burst.decay_s}}},
      {"restlessness_onset_min_s", s.restlessness_onset_min_s},
      {"restlessness_onset_max_s", s.restlessness_onset_max_s},
      {"channel_gains", s.channel_gains},
  };
}

void synth_from_json(const json& j, SynthConfig& s, std::vector<std::string>& unknown) {
  StrictReader r(j, "synth.", unknown);
  r.get("noise_amplitude_uv", s.noise_amplitude_uv);
  if (r.has("noise_spectrum")) {
    const std::string v = j.at("noise_spectrum").get<std::string>();
    if (v == "pink") {
      s.noise_spectrum = NoiseSpectrum::pink;
    } else if (v == "white") {
      s.noise_spectrum = NoiseSpectrum::white;
    } else {
      throw ConfigError("config field 'synth.noise_spectrum' must be pink|white, got '" + v + "'");
    }
  }
  r.get("common_mode_fraction", s.common_mode_fraction);
  r.get("beta_carrier_hz", s.beta_carrier_hz);
  r.get("idle_beta_fraction", s.idle_beta_fraction);
  r.get("spontaneous_rate_hz", s.spontaneous_rate_hz);
  r.get("spontaneous_fraction", s.spontaneous_fraction);
  r.get("spontaneous_duration_s", s.spontaneous_duration_s);
  r.get("spontaneous_decay_s", s.spontaneous_decay_s);
  r.get("erd_depth", s.erd_depth);
  r.get("rebound_amplitude_uv", s.rebound_amplitude_uv);
  r.get("rebound_latency_s", s.rebound_latency_s);
  r.get("rebound_duration_s", s.rebound_duration_s);
  r.get("rebound_probability_real", s.rebound_probability_real);
  r.get("rebound_probability_imaginary", s.rebound_probability_imaginary);
  r.get("restlessness_probability", s.restlessness_probability);
  if (const json* burst = r.section("restlessness_burst")) {
    StrictReader rb(*burst, "synth.restlessness_burst.", unknown);
    rb.get("amplitude_uv", s.restlessness_burst.amplitude_uv);
    rb.get("duration_s", s.restlessness_burst.duration_s);
    rb.get("decay_s", s.restlessness_burst.decay_s);
  }
  r.get("restlessness_onset_min_s", s.restlessness_onset_min_s);
  r.get("restlessness_onset_max_s", s.restlessness_onset_max_s);
  r.get("channel_gains", s.channel_gains);
}

}  // namespace

void EngineConfig::validate() const {
  const auto& p = params;
  p.layout.validate();

  const auto& f = p.pipeline;
  require(f.filter_order >= 1, "filter.order must be >= 1");
  require(f.broad_band_low_hz > 0 && f.broad_band_low_hz < f.broad_band_high_hz &&
              f.broad_band_high_hz < p.layout.sample_rate / 2,
          "filter.broad_band_hz must satisfy 0 < low < high < rate/2");
  require(f.beta_band_low_hz > 0 && f.beta_band_low_hz < f.beta_band_high_hz &&
              f.beta_band_high_hz < p.layout.sample_rate / 2,
          "filter.beta_band_hz must satisfy 0 < low < high < rate/2");
  require(f.cs_window_s > 0, "control_signal.window_s must be positive");
  require(f.cs_hop_s > 0, "control_signal.hop_s must be positive");
  require(f.cs_smoothing >= 1, "control_signal.smoothing must be >= 1");

  const auto& g = p.inhibitor;
  require(g.is_window_s > 0, "inhibitor_signal.window_s must be positive");
  require(g.is_hop_s > 0, "inhibitor_signal.hop_s must be positive");
  require(g.min_inhibition_s > 0, "gate.min_inhibition_s must be positive");
  require(g.max_inhibition_s >= g.min_inhibition_s,
          "gate.max_inhibition_s must be >= gate.min_inhibition_s");
  require(g.readiness_fraction > 0 && g.readiness_fraction <= 1,
          "gate.readiness_fraction must lie in (0, 1]");

  require(p.thresholds.th1_multiplier > p.thresholds.th2_multiplier,
          "thresholds.th1_std_multiplier must exceed th2_std_multiplier");

  const auto& proto = p.protocol;
  require(proto.baseline_s > 0, "protocol.baseline_s must be positive");
  require(proto.ready_s > 0, "protocol.ready_s must be positive");
  require(proto.steady_s > 0, "protocol.steady_s must be positive");
  require(proto.move_s > 0, "protocol.move_s must be positive");
  require(proto.stop_s > 0, "protocol.stop_s must be positive");
  require(proto.inter_trial_s > 0, "protocol.inter_trial_s must be positive");

  require(p.plan.sessions_per_task > 0 && p.plan.sessions_per_task % 2 == 0,
          "plan.sessions_per_task must be positive and even for a balanced on/off split");
  require(p.plan.trials_per_session > 0, "plan.trials_per_session must be positive");
  require(!p.plan.task_order.empty(), "plan.task_order must not be empty");

  synth.validate(p.layout, proto.stop_s);
}

std::string EngineConfig::to_json_text() const {
  const auto& p = params;
  json j{
      {"seed", seed},
      {"layout",
       {{"channels", p.layout.names}, {"sample_rate_hz", p.layout.sample_rate}}},
      {"filter",
       {{"broad_band_hz", {p.pipeline.broad_band_low_hz, p.pipeline.broad_band_high_hz}},
        {"beta_band_hz", {p.pipeline.beta_band_low_hz, p.pipeline.beta_band_high_hz}},
        {"order", p.pipeline.filter_order}}},
      {"control_signal",
       {{"window_s", p.pipeline.cs_window_s},
        {"hop_s", p.pipeline.cs_hop_s},
        {"smoothing", p.pipeline.cs_smoothing}}},
      {"inhibitor_signal",
       {{"window_s", p.inhibitor.is_window_s}, {"hop_s", p.inhibitor.is_hop_s}}},
      {"thresholds",
       {{"th1_std_multiplier", p.thresholds.th1_multiplier},
        {"th2_std_multiplier", p.thresholds.th2_multiplier}}},
      {"gate",
       {{"min_inhibition_s", p.inhibitor.min_inhibition_s},
        {"max_inhibition_s", p.inhibitor.max_inhibition_s},
        {"readiness_fraction", p.inhibitor.readiness_fraction},
        {"readiness_scope", p.inhibitor.scope == ReadinessScope::trailing_window
                                ? "trailing_window"
                                : "whole_phase"}}},
      {"protocol",
       {{"baseline_s", p.protocol.baseline_s},
        {"ready_s", p.protocol.ready_s},
        {"steady_s", p.protocol.steady_s},
        {"move_s", p.protocol.move_s},
        {"stop_s", p.protocol.stop_s},
        {"inter_trial_s", p.protocol.inter_trial_s}}},
      {"plan",
       {{"sessions_per_task", p.plan.sessions_per_task},
        {"trials_per_session", p.plan.trials_per_session},
        {"task_order", json::array()}}},
      {"synth", synth_to_json(synth)},
  };
  for (TaskType t : p.plan.task_order) j["plan"]["task_order"].push_back(to_string(t));
  return j.dump(2) + "\n";
}

std::string EngineConfig::fingerprint() const {
  // FNV-1a over the canonical (sorted-key) serialization
  const std::string text = to_json_text();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

EngineConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  EngineConfig cfg;
  std::vector<std::string> unknown;
  {
    StrictReader root(j, "", unknown);
    root.get("seed", cfg.seed);
    if (const json* sec = root.section("layout")) {
      StrictReader r(*sec, "layout.", unknown);
      r.get("channels", cfg.params.layout.names);
      r.get("sample_rate_hz", cfg.params.layout.sample_rate);
    }
    if (const json* sec = root.section("filter")) {
      StrictReader r(*sec, "filter.", unknown);
      std::vector<double> band;
      if (r.has("broad_band_hz")) {
        band = sec->at("broad_band_hz").get<std::vector<double>>();
        if (band.size() != 2) throw ConfigError("filter.broad_band_hz must be [low, high]");
        cfg.params.pipeline.broad_band_low_hz = band[0];
        cfg.params.pipeline.broad_band_high_hz = band[1];
      }
      if (r.has("beta_band_hz")) {
        band = sec->at("beta_band_hz").get<std::vector<double>>();
        if (band.size() != 2) throw ConfigError("filter.beta_band_hz must be [low, high]");
        cfg.params.pipeline.beta_band_low_hz = band[0];
        cfg.params.pipeline.beta_band_high_hz = band[1];
      }
      r.get("order", cfg.params.pipeline.filter_order);
    }
    if (const json* sec = root.section("control_signal")) {
      StrictReader r(*sec, "control_signal.", unknown);
      r.get("window_s", cfg.params.pipeline.cs_window_s);
      r.get("hop_s", cfg.params.pipeline.cs_hop_s);
      r.get("smoothing", cfg.params.pipeline.cs_smoothing);
    }
    if (const json* sec = root.section("inhibitor_signal")) {
      StrictReader r(*sec, "inhibitor_signal.", unknown);
      r.get("window_s", cfg.params.inhibitor.is_window_s);
      r.get("hop_s", cfg.params.inhibitor.is_hop_s);
    }
    if (const json* sec = root.section("thresholds")) {
      StrictReader r(*sec, "thresholds.", unknown);
      r.get("th1_std_multiplier", cfg.params.thresholds.th1_multiplier);
      r.get("th2_std_multiplier", cfg.params.thresholds.th2_multiplier);
    }
    if (const json* sec = root.section("gate")) {
      StrictReader r(*sec, "gate.", unknown);
      r.get("min_inhibition_s", cfg.params.inhibitor.min_inhibition_s);
      r.get("max_inhibition_s", cfg.params.inhibitor.max_inhibition_s);
      r.get("readiness_fraction", cfg.params.inhibitor.readiness_fraction);
      if (r.has("readiness_scope")) {
        const std::string v = sec->at("readiness_scope").get<std::string>();
        if (v == "trailing_window") {
          cfg.params.inhibitor.scope = ReadinessScope::trailing_window;
        } else if (v == "whole_phase") {
          cfg.params.inhibitor.scope = ReadinessScope::whole_phase;
        } else {
          throw ConfigError("gate.readiness_scope must be trailing_window|whole_phase");
        }
      }
    }
    if (const json* sec = root.section("protocol")) {
      StrictReader r(*sec, "protocol.", unknown);
      r.get("baseline_s", cfg.params.protocol.baseline_s);
      r.get("ready_s", cfg.params.protocol.ready_s);
      r.get("steady_s", cfg.params.protocol.steady_s);
      r.get("move_s", cfg.params.protocol.move_s);
      if (r.has("go_s")) {  // Go is an accepted alias for the Move phase
        cfg.params.protocol.move_s = sec->at("go_s").get<double>();
      }
      r.get("stop_s", cfg.params.protocol.stop_s);
      r.get("inter_trial_s", cfg.params.protocol.inter_trial_s);
    }
    if (const json* sec = root.section("plan")) {
      StrictReader r(*sec, "plan.", unknown);
      r.get("sessions_per_task", cfg.params.plan.sessions_per_task);
      r.get("trials_per_session", cfg.params.plan.trials_per_session);
      if (r.has("task_order")) {
        cfg.params.plan.task_order.clear();
        for (const auto& t : sec->at("task_order")) {
          cfg.params.plan.task_order.push_back(task_from_string(t.get<std::string>()));
        }
      }
    }
    if (const json* sec = root.section("synth")) {
      synth_from_json(*sec, cfg.synth, unknown);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  cfg.validate();
  return cfg;
}

EngineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

EngineConfig default_config() {
  EngineConfig cfg;
  cfg.validate();
  return cfg;
}

}  // namespace betagate
