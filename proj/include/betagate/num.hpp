#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace betagate {

// Shortest decimal form that round-trips to the exact same double. Keeps
// text artifacts compact and makes save/load and rerun comparisons exact.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace betagate
