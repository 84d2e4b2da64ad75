#pragma once

#include <string>

#include "p2pmarket/common.hpp"

namespace p2pm {

// Parses "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z". Throws
// ValidationError on anything else. Locale-independent.
Timestamp parse_timestamp(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

// Calendar date "YYYY-MM-DD" of the instant shifted by the given UTC
// offset; used for per-day cost bucketing.
std::string civil_date(Timestamp ts, int utc_offset_minutes);

// Accepts "UTC", "Z", "UTC+H", "UTC-HH:MM", "+HH:MM", "-HH:MM" and
// returns the offset in minutes. Throws ValidationError otherwise.
int parse_utc_offset(const std::string& timezone);

}  // namespace p2pm
