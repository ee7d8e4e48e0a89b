#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "parkcast/core/error.hpp"
#include "parkcast/core/geo.hpp"
#include "parkcast/core/rng.hpp"
#include "parkcast/feat/features.hpp"

using namespace parkcast;

namespace {

core::PoiSet make_pois(int n, core::Rng& rng) {
  core::PoiSet pois;
  for (int i = 0; i < n; ++i) {
    pois.items.push_back({"p" + std::to_string(i), rng.uniform(40.60, 40.66), rng.uniform(22.93, 22.99)});
  }
  return pois;
}

struct Fixture {
  core::Sector sector{"S1", 40.6401, 22.9444, 11};
  core::PoiSet pois;
  core::WeatherSeries weather;
  std::vector<core::CalendarInfo> calendar_records;
  core::CalendarTable calendar;

  Fixture() {
    core::Rng rng(99);
    pois = make_pois(feat::kPoiFeatureCount, rng);
    core::DateTime t = core::parse_datetime("2022-03-03T00:00");
    for (int h = 0; h < 72; ++h) {
      weather.samples.push_back({t, 10.0 + 0.25 * h, 55.0 + 0.1 * h});
      t = core::from_minute_number(core::to_minute_number(t) + 60);
    }
    calendar_records = {{core::Date{2022, 3, 3}, false, false},
                        {core::Date{2022, 3, 4}, true, false},
                        {core::Date{2022, 3, 5}, false, true}};
    calendar = core::CalendarTable(calendar_records);
  }
};

}  // namespace

TEST_CASE("poi_distances follows PoiSet order and matches brute force") {
  core::Rng rng(5);
  const core::PoiSet pois = make_pois(feat::kPoiFeatureCount, rng);
  const core::Sector sector{"S1", 40.6322, 22.9478, 9};

  const std::vector<double> d = feat::poi_distances(sector, pois);
  REQUIRE(d.size() == pois.size());
  for (size_t i = 0; i < pois.size(); ++i) {
    const double direct =
        core::haversine_km(sector.center_lat, sector.center_lon, pois.items[i].lat, pois.items[i].lon);
    CHECK(std::abs(d[i] - direct) <= 1e-12);
  }

  // Sector exactly on a PoI.
  core::PoiSet with_self = pois;
  with_self.items[3] = {"self", sector.center_lat, sector.center_lon};
  CHECK(feat::poi_distances(sector, with_self)[3] == 0.0);

  // Permuting the PoI rows permutes the output identically.
  core::PoiSet reversed = pois;
  std::reverse(reversed.items.begin(), reversed.items.end());
  const std::vector<double> dr = feat::poi_distances(sector, reversed);
  for (size_t i = 0; i < pois.size(); ++i) {
    CHECK(dr[i] == d[pois.size() - 1 - i]);
  }
}

TEST_CASE("build_vector layout and flags") {
  const Fixture fx;
  const core::TimeSlot slot{core::Date{2022, 3, 4}, 5};
  const feat::FeatureVector vv = feat::build_vector(fx.sector, slot, fx.weather, fx.calendar, fx.pois);
  CHECK(vv.size() == 28);
  CHECK(vv[feat::kColCapacity] == 11.0);
  CHECK(vv[feat::kColWeekday] == doctest::Approx(std::sin(2.0 * M_PI * 4 / 7.0)));  // Friday
  CHECK(vv[feat::kColDay] == doctest::Approx(std::sin(2.0 * M_PI * 3 / 31.0)));
  CHECK(vv[feat::kColMonth] == doctest::Approx(std::sin(2.0 * M_PI * 2 / 12.0)));
  CHECK(vv[feat::kColSlot] == 5.0);
  CHECK(vv[feat::kColHoliday] == 1.0);   // 2022-03-04 marked holiday in fixture
  CHECK(vv[feat::kColPandemic] == 0.0);

  const feat::FeatureVector pandemic_day =
      feat::build_vector(fx.sector, core::TimeSlot{core::Date{2022, 3, 5}, 5}, fx.weather, fx.calendar,
                         fx.pois);
  CHECK(pandemic_day[feat::kColHoliday] == 0.0);
  CHECK(pandemic_day[feat::kColPandemic] == 1.0);
}

TEST_CASE("two slots of one day differ only in slot and weather columns") {
  const Fixture fx;
  const core::Date d{2022, 3, 4};
  const feat::FeatureVector a = feat::build_vector(fx.sector, {d, 2}, fx.weather, fx.calendar, fx.pois);
  const feat::FeatureVector b = feat::build_vector(fx.sector, {d, 9}, fx.weather, fx.calendar, fx.pois);
  for (int c = 0; c < feat::kFeatureDim; ++c) {
    if (c == feat::kColSlot || c == feat::kColTemperature || c == feat::kColHumidity) {
      CHECK(a[c] != b[c]);  // fixture weather ramps, so these all move
    } else {
      CHECK(a[c] == b[c]);
    }
  }
}

TEST_CASE("build_vector is pure") {
  const Fixture fx;
  const core::TimeSlot slot{core::Date{2022, 3, 4}, 7};
  const feat::FeatureVector a = feat::build_vector(fx.sector, slot, fx.weather, fx.calendar, fx.pois);
  const feat::FeatureVector b = feat::build_vector(fx.sector, slot, fx.weather, fx.calendar, fx.pois);
  CHECK(a == b);  // bit-identical
}

TEST_CASE("build_vector rejects missing calendar and short PoI sets") {
  const Fixture fx;
  CHECK_THROWS_WITH_AS(
      feat::build_vector(fx.sector, {core::Date{2022, 3, 6}, 0}, fx.weather, fx.calendar, fx.pois),
      doctest::Contains("no calendar record"), core::ValidationError);

  core::PoiSet short_pois = fx.pois;
  short_pois.items.pop_back();
  CHECK_THROWS_WITH_AS(
      feat::build_vector(fx.sector, {core::Date{2022, 3, 4}, 0}, fx.weather, fx.calendar, short_pois),
      doctest::Contains("19"), core::ValidationError);
}
