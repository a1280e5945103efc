#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "temponet/error.hpp"

namespace temponet {

struct CivilDate {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

/// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
/// days_from_civil).
inline std::int64_t days_from_civil(const CivilDate& d) {
  std::int64_t y = d.year;
  const int m = d.month;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d.day) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                   static_cast<int>(d)};
}

namespace detail {

inline bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool valid_date(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1) return false;
  static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int len = lengths[m - 1];
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) len = 29;
  return d <= len;
}

}  // namespace detail

/// Parses "YYYY-MM-DD".
inline CivilDate parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
      !detail::parse_int(s.substr(0, 4), y) ||
      !detail::parse_int(s.substr(5, 2), m) ||
      !detail::parse_int(s.substr(8, 2), d) || !detail::valid_date(y, m, d)) {
    throw ArgumentError("invalid date: '" + std::string(s) + "' (want YYYY-MM-DD)");
  }
  return CivilDate{y, m, d};
}

inline std::string format_date(const CivilDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

/// Parses a fixed UTC offset: "+02:00", "-0530", "Z", "+02". Returns seconds.
inline int parse_utc_offset(std::string_view s) {
  if (s.empty() || s == "Z" || s == "z") return 0;
  const char sign = s[0];
  if (sign != '+' && sign != '-') {
    throw ArgumentError("invalid UTC offset: '" + std::string(s) + "'");
  }
  std::string_view rest = s.substr(1);
  int hh = 0, mm = 0;
  bool ok = false;
  if (rest.size() == 5 && rest[2] == ':') {
    ok = detail::parse_int(rest.substr(0, 2), hh) &&
         detail::parse_int(rest.substr(3, 2), mm);
  } else if (rest.size() == 4) {
    ok = detail::parse_int(rest.substr(0, 2), hh) &&
         detail::parse_int(rest.substr(2, 2), mm);
  } else if (rest.size() == 2) {
    ok = detail::parse_int(rest, hh);
  }
  if (!ok || hh > 14 || mm > 59) {
    throw ArgumentError("invalid UTC offset: '" + std::string(s) + "'");
  }
  const int secs = hh * 3600 + mm * 60;
  return sign == '-' ? -secs : secs;
}

/// Parses a post timestamp to epoch seconds. Accepts integer epoch seconds or
/// ISO-8601 "YYYY-MM-DD[T ]hh:mm:ss[.frac][Z|±hh:mm|±hhmm]" (no suffix = UTC).
/// Returns false on malformed input.
inline bool try_parse_timestamp(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  {  // integer epoch seconds
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) {
      out = v;
      return true;
    }
  }
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' ||
      (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
    return false;
  }
  int y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
  if (!detail::parse_int(s.substr(0, 4), y) ||
      !detail::parse_int(s.substr(5, 2), mo) ||
      !detail::parse_int(s.substr(8, 2), d) ||
      !detail::parse_int(s.substr(11, 2), hh) ||
      !detail::parse_int(s.substr(14, 2), mi) ||
      !detail::parse_int(s.substr(17, 2), ss) || !detail::valid_date(y, mo, d) ||
      hh > 23 || mi > 59 || ss > 60) {
    return false;
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {  // fractional seconds ignored
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  }
  int offset = 0;
  if (pos < s.size()) {
    try {
      offset = parse_utc_offset(s.substr(pos));
    } catch (const ArgumentError&) {
      return false;
    }
  }
  out = days_from_civil(CivilDate{y, mo, d}) * 86400 + hh * 3600 + mi * 60 + ss -
        offset;
  return true;
}

inline std::int64_t parse_timestamp(std::string_view s) {
  std::int64_t v = 0;
  if (!try_parse_timestamp(s, v)) {
    throw FormatError("invalid timestamp: '" + std::string(s) + "'");
  }
  return v;
}

/// Floor division for epoch arithmetic with negative times.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace temponet
