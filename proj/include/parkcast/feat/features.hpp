#pragma once

#include <array>
#include <vector>

#include "parkcast/core/types.hpp"

namespace parkcast::feat {

// Model input layout, 28 columns:
//   [0..18]  distances to the 19 PoIs, in PoiSet order (km)
//   [19]     sector capacity
//   [20]     weekday sine
//   [21]     day-of-month sine
//   [22]     month sine
//   [23]     slot offset from 07:00 (hours)
//   [24]     windowed temperature
//   [25]     windowed humidity
//   [26]     holiday flag
//   [27]     pandemic flag
inline constexpr int kPoiFeatureCount = 19;
inline constexpr int kFeatureDim = 28;

inline constexpr int kColCapacity = 19;
inline constexpr int kColWeekday = 20;
inline constexpr int kColDay = 21;
inline constexpr int kColMonth = 22;
inline constexpr int kColSlot = 23;
inline constexpr int kColTemperature = 24;
inline constexpr int kColHumidity = 25;
inline constexpr int kColHoliday = 26;
inline constexpr int kColPandemic = 27;

using FeatureVector = std::array<double, kFeatureDim>;

/// Haversine distance from the sector center to every PoI, in PoiSet order.
std::vector<double> poi_distances(const core::Sector& sector, const core::PoiSet& pois);

/// Assembles the raw (unstandardized) feature vector for one cell.
/// Throws ValidationError when slot.date has no calendar record or when the
/// PoI set does not have exactly 19 entries.
FeatureVector build_vector(const core::Sector& sector, const core::TimeSlot& slot,
                           const core::WeatherSeries& weather, const core::CalendarTable& calendar,
                           const core::PoiSet& pois);

}  // namespace parkcast::feat
