#pragma once

#include <cstdio>
#include <string>

namespace vnag {

/// Round-trippable decimal text for a double (17 significant digits).
inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace vnag
