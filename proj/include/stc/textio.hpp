#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "stc/errors.hpp"

namespace stc {

/// Decimal serialization with 17 significant digits: enough to reproduce
/// any IEEE-754 double bit-exactly through a correctly rounded parse.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse17(const std::string& s) {
  if (s.empty()) throw ConfigError("empty numeric field");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ConfigError("malformed numeric field '" + s + "'");
  return v;
}

/// 64-bit FNV-1a over a canonical description string.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace stc
