#include "twinbias/io_util.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace twinbias {

std::string to_hex16(u64 v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

u64 from_hex16(const std::string& s) {
  if (s.size() != 16) raise(errkind::argument, "hex digest must be 16 characters");
  u64 v = 0;
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9')
      v |= u64(c - '0');
    else if (c >= 'a' && c <= 'f')
      v |= u64(c - 'a' + 10);
    else
      raise(errkind::argument, "hex digest has a non-hex character");
  }
  return v;
}

u64 parse_u64_arg(const std::string& raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw)
    if (c != '_') s += c;
  if (s.empty()) raise(errkind::argument, "empty integer argument");

  const bool plain = s.find_first_not_of("0123456789") == std::string::npos;
  if (plain) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno == ERANGE || *end != '\0' || v >= (1ull << 63))
      raise(errkind::argument, "integer argument out of range: " + raw);
    return v;
  }

  errno = 0;
  char* end = nullptr;
  const long double v = std::strtold(s.c_str(), &end);
  if (errno == ERANGE || end == s.c_str() || *end != '\0' || !std::isfinite(double(v)))
    raise(errkind::argument, "unparseable integer argument: " + raw);
  if (v < 0 || v >= 9223372036854775808.0L || rintl(v) != v)
    raise(errkind::argument, "argument must denote an exact integer below 2^63: " + raw);
  return static_cast<u64>(v);
}

u64 parse_u64_arg(const std::string& raw, const char* name) {
  try {
    return parse_u64_arg(raw);
  } catch (const error& e) {
    raise(e.kind(), std::string(name) + ": " + e.what());
  }
}

std::optional<u64> env_u64(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return parse_u64_arg(v);
}

}  // namespace twinbias
