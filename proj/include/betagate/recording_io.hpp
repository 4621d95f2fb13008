#pragma once

#include <string>

#include "betagate/types.hpp"

namespace betagate {

// Recording CSV: a `# rate=<Hz>` comment line, a channel-name header row,
// then one row per frame in microvolts. Values use shortest-round-trip
// formatting, so save followed by load is exact.
void save_recording(const MultiChannelRecording& rec, const std::string& path);

std::string recording_to_csv(const MultiChannelRecording& rec);

MultiChannelRecording load_recording(const std::string& path);

MultiChannelRecording recording_from_csv(const std::string& text);

}  // namespace betagate
