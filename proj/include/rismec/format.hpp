// Locale-independent number parsing/formatting helpers.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rismec {

std::vector<std::string_view> split(std::string_view text, char sep);

/// Strict parse of the whole string; throws InvalidInput otherwise.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

/// Shortest representation that round-trips, "C" locale.
std::string format_double(double value);

/// Fixed-precision representation, "C" locale.
std::string format_fixed(double value, int digits);

} // namespace rismec
