#include "pftpha/format.h"

#include <charconv>
#include <system_error>

namespace pftpha {

namespace {

std::string to_chars_string(double value, std::chars_format fmt,
                            int precision) {
  char buf[64];
  auto res = precision < 0
                 ? std::to_chars(buf, buf + sizeof buf, value, fmt)
                 : std::to_chars(buf, buf + sizeof buf, value, fmt, precision);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_roundtrip(double value) {
  return to_chars_string(value, std::chars_format::general, -1);
}

std::string format_significant(double value, int digits) {
  return to_chars_string(value, std::chars_format::general, digits);
}

std::string format_fixed(double value, int decimals) {
  return to_chars_string(value, std::chars_format::fixed, decimals);
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace pftpha
