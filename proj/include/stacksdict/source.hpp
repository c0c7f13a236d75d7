#pragma once

#include <cstdint>
#include <string>

namespace stacksdict {

using FileId = int32_t;

// Byte range into one source file. `line` is the 1-based line of `begin`.
struct SourceSpan {
  FileId file = -1;
  uint32_t begin = 0;
  uint32_t end = 0;
  uint32_t line = 1;

  uint32_t length() const { return end - begin; }
  bool operator==(const SourceSpan&) const = default;
};

// Joins two spans of the same file into their covering range.
inline SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  if (a.file < 0) return b;
  if (b.file < 0) return a;
  SourceSpan s = a;
  if (b.begin < s.begin) {
    s.begin = b.begin;
    s.line = b.line;
  }
  if (b.end > s.end) s.end = b.end;
  return s;
}

}  // namespace stacksdict
