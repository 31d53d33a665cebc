#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace nlgame {

/// Decimal with 17 significant digits; non-finite values print as inf/-inf/nan.
inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace nlgame
