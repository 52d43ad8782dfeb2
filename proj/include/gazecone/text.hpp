#pragma once

#include <charconv>
#include <string>

namespace gazecone {

// Shortest decimal string that parses back to exactly `d`.
inline std::string format_double(double d) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

inline void append_double(std::string& out, double d) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), d);
  out.append(buf, res.ptr);
}

}  // namespace gazecone
