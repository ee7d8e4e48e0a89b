#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace parkcast::core {

/// Civil calendar date. All times in this project are naive local time;
/// there is no time-zone or DST arithmetic anywhere.
struct Date {
  int year{};
  int month{};  // 1..12
  int day{};    // 1..31

  auto operator<=>(const Date&) const = default;
};

/// Civil date-time with minute precision.
struct DateTime {
  Date date{};
  int minute_of_day{};  // 0..1439

  auto operator<=>(const DateTime&) const = default;
};

bool is_valid_date(int year, int month, int day);
int days_in_month(int year, int month);

/// 0 = Monday .. 6 = Sunday.
int day_of_week(const Date& d);

/// Days since 1970-01-01 (negative before).
std::int64_t to_day_number(const Date& d);
Date from_day_number(std::int64_t days);

/// Minutes since 1970-01-01T00:00.
std::int64_t to_minute_number(const DateTime& t);
DateTime from_minute_number(std::int64_t minutes);

Date add_days(const Date& d, int days);

/// Parses "YYYY-MM-DD"; throws ParseError on malformed or calendar-invalid input.
Date parse_date(std::string_view text);
std::string format_date(const Date& d);

/// Parses "YYYY-MM-DDTHH:MM"; throws ParseError on malformed input.
DateTime parse_datetime(std::string_view text);
std::string format_datetime(const DateTime& t);

}  // namespace parkcast::core
