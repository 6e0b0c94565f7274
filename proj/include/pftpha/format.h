#ifndef PFTPHA_FORMAT_H_
#define PFTPHA_FORMAT_H_

#include <string>

namespace pftpha {

/// Shortest text that parses back to exactly `value`. Locale independent.
std::string format_roundtrip(double value);

/// `value` with `digits` significant digits (printf %g style, locale free).
std::string format_significant(double value, int digits);

/// `value` with exactly `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Strict locale-free parse of a whole string as a double.
bool parse_double(const std::string& text, double& out);

}  // namespace pftpha

#endif  // PFTPHA_FORMAT_H_
