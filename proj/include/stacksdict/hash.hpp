#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace stacksdict {

// FNV-1a, used for content hashes and run ids. Not cryptographic;
// collisions only risk a missed stale-target warning.
inline uint64_t fnv1a64(std::string_view data, uint64_t seed = 1469598103934665603ull) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string content_hash(std::string_view data) { return hex64(fnv1a64(data)); }

}  // namespace stacksdict
