#include "parkcast/feat/encode.hpp"

#include <algorithm>
#include <cmath>

#include "parkcast/core/error.hpp"

namespace parkcast::feat {

double encode_weekday(int weekday) {
  if (weekday < 0 || weekday > 6) {
    throw core::ValidationError("weekday " + std::to_string(weekday) + " out of range [0, 6]");
  }
  return std::sin(2.0 * M_PI * weekday / 7.0);
}

double encode_day(int day, int n_days) {
  if (n_days < 28 || n_days > 31) {
    throw core::ValidationError("n_days " + std::to_string(n_days) + " out of range [28, 31]");
  }
  if (day < 1 || day > n_days) {
    throw core::ValidationError("day " + std::to_string(day) + " out of range [1, " +
                                std::to_string(n_days) + "]");
  }
  return std::sin(2.0 * M_PI * (day - 1) / n_days);
}

double encode_month(int month) {
  if (month < 1 || month > 12) {
    throw core::ValidationError("month " + std::to_string(month) + " out of range [1, 12]");
  }
  return std::sin(2.0 * M_PI * (month - 1) / 12.0);
}

double encode_slot(int slot_index) {
  if (slot_index < 0 || slot_index >= core::kSlotsPerDay) {
    throw core::ValidationError("slot index " + std::to_string(slot_index) + " out of range [0, 11]");
  }
  return static_cast<double>(slot_index);
}

WeatherFeatures encode_weather(const core::WeatherSeries& series, const core::DateTime& at, int window) {
  if (series.samples.empty()) {
    throw core::ValidationError("weather series is empty");
  }
  if (window < 1) {
    throw core::ValidationError("weather window must be >= 1");
  }
  if (at.minute_of_day % 60 != 0) {
    throw core::ValidationError("weather lookup time must be on the hour");
  }

  const auto& samples = series.samples;
  double sum_t = 0.0;
  double sum_h = 0.0;
  const std::int64_t at_minute = core::to_minute_number(at);
  for (int i = 0; i < window; ++i) {
    const std::int64_t hour_minute = at_minute - static_cast<std::int64_t>(i) * 60;
    // Last sample at or before the hour; the earliest sample when none precede.
    auto it = std::upper_bound(samples.begin(), samples.end(), hour_minute,
                               [](std::int64_t m, const core::WeatherSample& s) {
                                 return m < core::to_minute_number(s.timestamp);
                               });
    const core::WeatherSample& pick = (it == samples.begin()) ? samples.front() : *(it - 1);
    sum_t += pick.temperature_c;
    sum_h += pick.humidity_pct;
  }
  return WeatherFeatures{sum_t / window, sum_h / window};
}

}  // namespace parkcast::feat
