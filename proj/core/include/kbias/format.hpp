#pragma once

#include <charconv>
#include <string>

namespace kbias {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace kbias
