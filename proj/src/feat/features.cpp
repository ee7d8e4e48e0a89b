#include "parkcast/feat/features.hpp"

#include "parkcast/core/error.hpp"
#include "parkcast/core/geo.hpp"
#include "parkcast/feat/encode.hpp"

namespace parkcast::feat {

std::vector<double> poi_distances(const core::Sector& sector, const core::PoiSet& pois) {
  std::vector<double> distances;
  distances.reserve(pois.size());
  for (const core::Poi& p : pois.items) {
    distances.push_back(core::haversine_km(sector.center_lat, sector.center_lon, p.lat, p.lon));
  }
  return distances;
}

FeatureVector build_vector(const core::Sector& sector, const core::TimeSlot& slot,
                           const core::WeatherSeries& weather, const core::CalendarTable& calendar,
                           const core::PoiSet& pois) {
  if (pois.size() != kPoiFeatureCount) {
    throw core::ValidationError("expected " + std::to_string(kPoiFeatureCount) + " PoIs, got " +
                                std::to_string(pois.size()));
  }
  const core::CalendarInfo& day_info = calendar.at(slot.date);

  FeatureVector v{};
  const std::vector<double> dists = poi_distances(sector, pois);
  for (int i = 0; i < kPoiFeatureCount; ++i) {
    v[i] = dists[i];
  }
  v[kColCapacity] = static_cast<double>(sector.capacity);
  v[kColWeekday] = encode_weekday(core::day_of_week(slot.date));
  v[kColDay] = encode_day(slot.date.day, core::days_in_month(slot.date.year, slot.date.month));
  v[kColMonth] = encode_month(slot.date.month);
  v[kColSlot] = encode_slot(slot.index);
  const WeatherFeatures w = encode_weather(weather, core::slot_start(slot));
  v[kColTemperature] = w.temperature;
  v[kColHumidity] = w.humidity;
  v[kColHoliday] = day_info.is_holiday ? 1.0 : 0.0;
  v[kColPandemic] = day_info.is_pandemic ? 1.0 : 0.0;
  return v;
}

}  // namespace parkcast::feat
