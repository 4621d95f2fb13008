#pragma once

#include <cstdint>
#include <string>

#include "betagate/experiment.hpp"

namespace betagate {

// Whole-engine configuration. Defaults reproduce the canonical protocol and
// pipeline constants exactly; load_config applies overrides from a JSON file
// and rejects unknown keys.
struct EngineConfig {
  EngineParams params;
  SynthConfig synth;
  uint64_t seed = 1;

  void validate() const;

  // 16-hex-digit digest of the fully resolved config; embedded in every
  // output artifact so results are reproducible from the artifacts alone.
  std::string fingerprint() const;

  std::string to_json_text() const;
};

EngineConfig config_from_json_text(const std::string& text);

// Reads and validates a config file; missing fields keep their defaults.
EngineConfig load_config(const std::string& path);

EngineConfig default_config();

}  // namespace betagate
