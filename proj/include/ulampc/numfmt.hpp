#pragma once

#include <string>
#include <string_view>

namespace ulampc {

// Shortest decimal that round-trips the exact double value.
std::string format_double(double value);

// Strict parse of a full token (leading/trailing junk rejected).
// Throws Error(Io) on failure.  Empty input parses to NaN so optional
// numeric CSV fields survive a round trip.
double parse_double(std::string_view text);

std::string format_int(long long value);
long long parse_int(std::string_view text);

}  // namespace ulampc
