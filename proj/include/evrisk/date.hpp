#pragma once

#include <compare>
#include <string>

namespace evrisk {

/// Calendar date (proleptic Gregorian). Parsed from ISO-8601 "YYYY-MM-DD".
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;
};

/// Parses "YYYY-MM-DD". Throws MalformedRow on any deviation
/// (wrong width, non-digits, out-of-range month/day).
[[nodiscard]] Date parse_date(const std::string& text);

[[nodiscard]] std::string format_date(const Date& d);

/// Days since 1970-01-01; negative before the epoch.
[[nodiscard]] long long serial_day(const Date& d);

/// Inverse of serial_day.
[[nodiscard]] Date date_from_serial(long long serial);

/// Calendar-day difference b − a.
[[nodiscard]] inline long long days_between(const Date& a, const Date& b) {
  return serial_day(b) - serial_day(a);
}

/// "2025Q3"-style label, quarters split at month boundaries 3/6/9/12.
[[nodiscard]] std::string quarter_label(const Date& d);

}  // namespace evrisk
