#pragma once

#include <cstdio>
#include <string>

namespace qsearch {

// Round-trippable decimal form used by every CSV writer.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace qsearch
