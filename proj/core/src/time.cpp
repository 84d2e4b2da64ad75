#include "p2pmarket/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace p2pm {

namespace {

bool parse_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc() && ptr == first + len;
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  // YYYY-MM-DDTHH:MM:SS with optional 'Z'
  std::string s = text;
  if (!s.empty() && s.back() == 'Z') s.pop_back();
  int y, mo, d, h, mi, sec;
  const bool shape_ok =
      s.size() == 19 && s[4] == '-' && s[7] == '-' && (s[10] == 'T' || s[10] == ' ') &&
      s[13] == ':' && s[16] == ':' && parse_int(s, 0, 4, y) && parse_int(s, 5, 2, mo) &&
      parse_int(s, 8, 2, d) && parse_int(s, 11, 2, h) && parse_int(s, 14, 2, mi) &&
      parse_int(s, 17, 2, sec);
  if (!shape_ok)
    throw ValidationError("timestamp '" + text + "' is not ISO-8601 (expected YYYY-MM-DDTHH:MM:SS[Z])");

  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw ValidationError("timestamp '" + text + "' has an invalid calendar date");
  if (h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 59)
    throw ValidationError("timestamp '" + text + "' has an invalid time of day");

  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return Timestamp(days) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_timestamp(Timestamp ts) {
  Timestamp days = ts / 86400;
  Timestamp rem = ts % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600),
                int((rem % 3600) / 60), int(rem % 60));
  return buf;
}

std::string civil_date(Timestamp ts, int utc_offset_minutes) {
  Timestamp shifted = ts + Timestamp(utc_offset_minutes) * 60;
  Timestamp days = shifted / 86400;
  if (shifted % 86400 < 0) days -= 1;
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[12];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

int parse_utc_offset(const std::string& timezone) {
  std::string s = timezone;
  if (s == "UTC" || s == "Z" || s.empty()) return 0;
  if (s.rfind("UTC", 0) == 0) s = s.substr(3);
  if (s.empty()) return 0;

  int sign = 1;
  if (s[0] == '+') {
    s = s.substr(1);
  } else if (s[0] == '-') {
    sign = -1;
    s = s.substr(1);
  } else {
    throw ValidationError("timezone '" + timezone + "' is not UTC or a fixed offset like UTC+10 or -05:30");
  }

  int hours = 0, minutes = 0;
  const auto colon = s.find(':');
  const std::string hour_part = colon == std::string::npos ? s : s.substr(0, colon);
  const std::string min_part = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (hour_part.empty() || hour_part.size() > 2 ||
      !parse_int(hour_part, 0, hour_part.size(), hours))
    throw ValidationError("timezone '" + timezone + "' has a malformed hour offset");
  if (!min_part.empty() && (min_part.size() != 2 || !parse_int(min_part, 0, 2, minutes)))
    throw ValidationError("timezone '" + timezone + "' has a malformed minute offset");
  if (hours > 14 || minutes > 59)
    throw ValidationError("timezone '" + timezone + "' offset out of range");
  return sign * (hours * 60 + minutes);
}

}  // namespace p2pm
