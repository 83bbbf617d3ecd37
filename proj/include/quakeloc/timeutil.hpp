#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace quakeloc {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]" with an optional
// "Z" or "+HH:MM"/"-HH:MM" offset; a space may replace the 'T'.
// Fractional seconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);

// "YYYY-MM-DD"
std::string format_date(std::chrono::sys_days d);

}  // namespace quakeloc
