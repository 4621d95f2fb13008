#include "betagate/types.hpp"

#include <algorithm>
#include <set>

namespace betagate {

ChannelLayout ChannelLayout::standard() {
  return ChannelLayout{{"Cz", "C1", "C2", "FCz", "CPz"}, 512.0};
}

size_t ChannelLayout::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw ConfigError("channel layout is missing required channel '" + name + "'");
  }
  return static_cast<size_t>(it - names.begin());
}

void ChannelLayout::validate() const {
  if (names.empty()) throw ConfigError("channel layout has no channels");
  if (sample_rate <= 0.0) throw ConfigError("sample_rate must be positive");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw ConfigError("channel name must be non-empty");
    if (!seen.insert(n).second) throw ConfigError("duplicate channel name '" + n + "'");
  }
}

std::string to_string(TaskType t) {
  return t == TaskType::real_movement ? "real" : "imaginary";
}

TaskType task_from_string(const std::string& s) {
  if (s == "real") return TaskType::real_movement;
  if (s == "imaginary") return TaskType::imaginary_movement;
  throw ConfigError("unknown task type '" + s + "' (expected real|imaginary)");
}

}  // namespace betagate
