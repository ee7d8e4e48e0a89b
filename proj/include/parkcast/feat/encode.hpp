#pragma once

#include "parkcast/core/time.hpp"
#include "parkcast/core/types.hpp"

namespace parkcast::feat {

/// sin(2*pi*w/7) with w = 0 for Monday .. 6 for Sunday.
double encode_weekday(int weekday);

/// sin(2*pi*(d-1)/n_days), d = day of month, n_days = days in that month.
double encode_day(int day, int n_days);

/// sin(2*pi*(m-1)/12), m = 1..12.
double encode_month(int month);

/// Raw hour offset from the 07:00 enforcement start (0..11); standardized
/// downstream rather than sine-encoded, since slots never wrap around.
double encode_slot(int slot_index);

/// Windowed weather average at a time on the hour: mean of the `window`
/// hourly values at {at, at-1h, ..., at-(window-1)h}. An hour missing from
/// the series takes the nearest earlier sample; if no sample precedes it,
/// the earliest sample in the series. Total for any nonempty series.
struct WeatherFeatures {
  double temperature{};
  double humidity{};
};
WeatherFeatures encode_weather(const core::WeatherSeries& series, const core::DateTime& at, int window = 6);

}  // namespace parkcast::feat
