#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace betagate {

// Error hierarchy. The CLI maps these to nonzero exit codes; library code
// throws and never prints.
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public EngineError {
 public:
  using EngineError::EngineError;
};

class CalibrationError : public EngineError {
 public:
  using EngineError::EngineError;
};

class ScoringError : public EngineError {
 public:
  using EngineError::EngineError;
};

class ParseError : public EngineError {
 public:
  ParseError(const std::string& msg, size_t line)
      : EngineError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_ = 0;
};

// One multichannel sample, layout order.
using Frame = std::vector<double>;

struct ChannelLayout {
  std::vector<std::string> names;
  double sample_rate = 512.0;

  // Cz, C1, C2, FCz, CPz at 512 Hz.
  static ChannelLayout standard();

  size_t size() const { return names.size(); }
  // Index of a named channel; throws ConfigError naming the channel if absent.
  size_t index_of(const std::string& name) const;
  void validate() const;  // unique non-empty names, positive rate
};

// Uniformly sampled frames; sample i sits at start_time + i / sample_rate.
struct MultiChannelRecording {
  ChannelLayout layout;
  std::vector<Frame> frames;
  double start_time = 0.0;

  size_t n_samples() const { return frames.size(); }
  double duration() const { return static_cast<double>(frames.size()) / layout.sample_rate; }
};

struct ScalarStream {
  std::vector<double> values;
  double sample_rate = 512.0;
  double start_time = 0.0;
};

// Hop-timed band-power values; value k corresponds to the trailing window
// ending at first_emit_time + k * hop.
struct BandPowerSeries {
  std::vector<double> values;
  double window_len = 0.0;  // seconds
  double hop = 0.0;         // seconds
  double first_emit_time = 0.0;

  double emit_time(size_t k) const { return first_emit_time + static_cast<double>(k) * hop; }
  size_t size() const { return values.size(); }
};

enum class TaskType { real_movement, imaginary_movement };

std::string to_string(TaskType t);
TaskType task_from_string(const std::string& s);

}  // namespace betagate
