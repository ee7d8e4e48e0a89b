#include "parkcast/core/time.hpp"

#include <charconv>
#include <chrono>

#include "parkcast/core/error.hpp"

namespace parkcast::core {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(const Date& d) {
  return chr::year_month_day{chr::year{d.year}, chr::month{static_cast<unsigned>(d.month)},
                             chr::day{static_cast<unsigned>(d.day)}};
}

int parse_fixed_int(std::string_view text, size_t pos, size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw ParseError("malformed numeric field in '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

bool is_valid_date(int year, int month, int day) {
  return chr::year_month_day{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                             chr::day{static_cast<unsigned>(day)}}
      .ok();
}

int days_in_month(int year, int month) {
  const chr::year_month_day_last last{chr::year{year},
                                      chr::month_day_last{chr::month{static_cast<unsigned>(month)}}};
  return static_cast<int>(static_cast<unsigned>(last.day()));
}

int day_of_week(const Date& d) {
  const chr::weekday wd{chr::sys_days{to_ymd(d)}};
  return static_cast<int>(wd.iso_encoding()) - 1;  // ISO: Mon=1..Sun=7
}

std::int64_t to_day_number(const Date& d) {
  return chr::sys_days{to_ymd(d)}.time_since_epoch().count();
}

Date from_day_number(std::int64_t days) {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  return Date{static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
              static_cast<int>(static_cast<unsigned>(ymd.day()))};
}

std::int64_t to_minute_number(const DateTime& t) {
  return to_day_number(t.date) * 1440 + t.minute_of_day;
}

DateTime from_minute_number(std::int64_t minutes) {
  std::int64_t days = minutes / 1440;
  std::int64_t rem = minutes % 1440;
  if (rem < 0) {
    days -= 1;
    rem += 1440;
  }
  return DateTime{from_day_number(days), static_cast<int>(rem)};
}

Date add_days(const Date& d, int days) { return from_day_number(to_day_number(d) + days); }

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  const int y = parse_fixed_int(text, 0, 4);
  const int m = parse_fixed_int(text, 5, 2);
  const int d = parse_fixed_int(text, 8, 2);
  if (!is_valid_date(y, m, d)) {
    throw ParseError("calendar-invalid date '" + std::string(text) + "'");
  }
  return Date{y, m, d};
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

DateTime parse_datetime(std::string_view text) {
  if (text.size() != 16 || text[10] != 'T' || text[13] != ':') {
    throw ParseError("malformed timestamp '" + std::string(text) + "', expected YYYY-MM-DDTHH:MM");
  }
  const Date date = parse_date(text.substr(0, 10));
  const int hour = parse_fixed_int(text, 11, 2);
  const int minute = parse_fixed_int(text, 14, 2);
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
    throw ParseError("out-of-range time in '" + std::string(text) + "'");
  }
  return DateTime{date, hour * 60 + minute};
}

std::string format_datetime(const DateTime& t) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%sT%02d:%02d", format_date(t.date).c_str(),
                t.minute_of_day / 60, t.minute_of_day % 60);
  return buf;
}

}  // namespace parkcast::core
