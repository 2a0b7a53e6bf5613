#pragma once

#include <cstdio>
#include <string>

namespace dtplace {

inline std::string fixed(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace dtplace
