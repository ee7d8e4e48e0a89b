#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "parkcast/core/error.hpp"
#include "parkcast/core/rng.hpp"
#include "parkcast/label/labeling.hpp"

using namespace parkcast;

namespace {

core::DateTime at(const char* text) { return core::parse_datetime(text); }

label::SessionRate session(const std::string& sector, const char* when, double rate) {
  return label::SessionRate{sector, at(when), rate};
}

/// Brute-force reference for the smoothing rule: for every candidate cell,
/// scan every session independently and apply the weighting definition.
std::vector<label::SlotLabel> smooth_oracle(const std::vector<label::SessionRate>& sessions,
                                            const label::SmoothingConfig& cfg) {
  std::map<std::tuple<std::string, std::int64_t, int>, std::pair<double, int>> cells;
  for (const label::SessionRate& s : sessions) {
    const int m = s.midpoint.minute_of_day;
    if (m < 7 * 60 || m > 19 * 60) continue;
    int own = (m - 7 * 60) / 60;
    if (own > 11) own = 11;
    for (int t = 0; t < 12; ++t) {
      if (std::abs(t - own) > cfg.neighbor_slots) continue;
      const double center = 7 * 60 + 30 + t * 60;
      const double d = std::abs(m - center);
      auto& cell = cells[{s.sector_id, core::to_day_number(s.midpoint.date), t}];
      cell.first += std::exp(-d / cfg.sigma_minutes) * s.rate;
      cell.second += 1;
    }
  }
  std::vector<label::SlotLabel> out;
  for (const auto& [key, acc] : cells) {
    out.push_back(label::SlotLabel{std::get<0>(key),
                                   core::TimeSlot{core::from_day_number(std::get<1>(key)), std::get<2>(key)},
                                   std::clamp(acc.first / acc.second, 0.0, 1.0), acc.second});
  }
  return out;
}

}  // namespace

TEST_CASE("session_rate is the clamped violations-to-capacity quotient") {
  const core::Sector sector{"S1", 40.64, 22.94, 10};
  CHECK(label::session_rate({"S1", at("2022-03-04T12:50"), 20, 4}, sector).rate == 0.4);
  CHECK(label::session_rate({"S1", at("2022-03-04T12:50"), 20, 0}, sector).rate == 0.0);

  const core::Sector small{"S1", 40.64, 22.94, 11};
  CHECK(label::session_rate({"S1", at("2022-03-04T12:50"), 13, 13}, small).rate == 1.0);  // double parking

  const core::Sector other{"S2", 40.64, 22.94, 10};
  CHECK_THROWS_AS(label::session_rate({"S1", at("2022-03-04T12:50"), 5, 1}, other), core::ValidationError);
}

TEST_CASE("group_scans merges nearby scans of one sector") {
  std::vector<core::ScanSession> scans = {
      {"S1", at("2022-03-04T12:00"), 5, 1},
      {"S1", at("2022-03-04T12:10"), 5, 2},
      {"S1", at("2022-03-04T12:20"), 5, 3},
      {"S1", at("2022-03-04T13:30"), 4, 0},  // 70 min later: new session
      {"S2", at("2022-03-04T12:05"), 6, 6},
  };
  const auto sessions = label::group_scans(scans);
  REQUIRE(sessions.size() == 3);
  CHECK(sessions[0].sector_id == "S1");
  CHECK(sessions[0].timestamp == at("2022-03-04T12:10"));  // mean of the three
  CHECK(sessions[0].cars_scanned == 15);
  CHECK(sessions[0].violations == 6);
  CHECK(sessions[1].timestamp == at("2022-03-04T13:30"));
  CHECK(sessions[2].sector_id == "S2");
}

TEST_CASE("assign_raw picks the nearest slot center") {
  // 12:50 is nearest to the 12:30 center, i.e. the 12:00-13:00 slot.
  const auto build = label::assign_raw({session("S1", "2022-03-04T12:50", 0.35)});
  REQUIRE(build.labels.size() == 1);
  CHECK(build.labels[0].slot.index == 5);
  CHECK(build.labels[0].target == 0.35);
  CHECK(build.labels[0].support == 1);

  // Exactly 13:00 ties between 12:30 and 13:30; the earlier slot wins.
  const auto tie = label::assign_raw({session("S1", "2022-03-04T13:00", 0.5)});
  REQUIRE(tie.labels.size() == 1);
  CHECK(tie.labels[0].slot.index == 5);
}

TEST_CASE("assign_raw averages cohabiting sessions and drops out-of-hours ones") {
  const auto build = label::assign_raw({
      session("S1", "2022-03-04T12:10", 0.2),
      session("S1", "2022-03-04T12:40", 0.4),
      session("S1", "2022-03-04T05:00", 0.9),  // before enforcement
      session("S1", "2022-03-04T19:30", 0.9),  // after enforcement
  });
  REQUIRE(build.labels.size() == 1);
  CHECK(build.labels[0].target == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(build.labels[0].support == 2);
  CHECK(build.dropped_out_of_hours == 2);
}

TEST_CASE("smooth reproduces the worked single-session example") {
  label::SmoothingConfig cfg;  // sigma 210, one neighbor slot

  // A session exactly at a slot center keeps its rate: exp(0) = 1, |S| = 1.
  const auto centered = label::smooth({session("S1", "2022-03-04T12:30", 0.35)}, cfg);
  const auto own = std::find_if(centered.labels.begin(), centered.labels.end(),
                                [](const label::SlotLabel& l) { return l.slot.index == 5; });
  REQUIRE(own != centered.labels.end());
  CHECK(own->target == doctest::Approx(0.35).epsilon(1e-15));

  // A 12:50 session also reaches the 13:00-14:00 slot, 40 minutes from its
  // center, damped by exp(-40/210).
  const auto build = label::smooth({session("S1", "2022-03-04T12:50", 0.35)}, cfg);
  REQUIRE(build.labels.size() == 3);  // slots 4, 5, 6
  const auto next = std::find_if(build.labels.begin(), build.labels.end(),
                                 [](const label::SlotLabel& l) { return l.slot.index == 6; });
  REQUIRE(next != build.labels.end());
  CHECK(next->target == doctest::Approx(0.2892979031684833).epsilon(1e-12));
  CHECK(next->support == 1);
}

TEST_CASE("smooth matches the brute-force oracle on random layouts") {
  core::Rng rng(77);
  for (int layout = 0; layout < 120; ++layout) {
    std::vector<label::SessionRate> sessions;
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 39));
    for (int i = 0; i < n; ++i) {
      const std::string sector = "S" + std::to_string(rng.uniform_int(1, 3));
      const core::Date date = core::add_days(core::Date{2022, 3, 1}, static_cast<int>(rng.uniform_int(0, 2)));
      const int minute = static_cast<int>(rng.uniform_int(6 * 60, 20 * 60));  // includes out-of-hours
      sessions.push_back({sector, core::DateTime{date, minute}, rng.uniform()});
    }
    label::SmoothingConfig cfg;
    cfg.sigma_minutes = rng.uniform(30.0, 400.0);
    cfg.neighbor_slots = static_cast<int>(rng.uniform_int(0, 2));

    const auto got = label::smooth(sessions, cfg).labels;
    const auto want = smooth_oracle(sessions, cfg);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].sector_id == want[i].sector_id);
      CHECK(got[i].slot == want[i].slot);
      CHECK(got[i].support == want[i].support);
      CHECK(std::abs(got[i].target - want[i].target) <= 1e-12);
    }
  }
}

TEST_CASE("smoothing properties") {
  label::SmoothingConfig cfg;

  SUBCASE("targets never exceed the largest contributing rate") {
    core::Rng rng(78);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<label::SessionRate> sessions;
      double max_rate = 0.0;
      for (int i = 0; i < 10; ++i) {
        const double rate = rng.uniform();
        max_rate = std::max(max_rate, rate);
        sessions.push_back(
            {"S1", core::DateTime{core::Date{2022, 3, 4}, static_cast<int>(rng.uniform_int(420, 1140))},
             rate});
      }
      for (const label::SlotLabel& l : label::smooth(sessions, cfg).labels) {
        CHECK(l.target <= max_rate + 1e-15);
        CHECK(l.target >= 0.0);
      }
    }
  }

  SUBCASE("two mirrored sessions equal either one alone") {
    // 12:10 and 12:50 sit 20 minutes on either side of the 12:30 center.
    const auto pair = label::smooth(
        {session("S1", "2022-03-04T12:10", 0.4), session("S1", "2022-03-04T12:50", 0.4)}, cfg);
    const auto solo = label::smooth({session("S1", "2022-03-04T12:10", 0.4)}, cfg);
    const auto pair_own = std::find_if(pair.labels.begin(), pair.labels.end(),
                                       [](const label::SlotLabel& l) { return l.slot.index == 5; });
    const auto solo_own = std::find_if(solo.labels.begin(), solo.labels.end(),
                                       [](const label::SlotLabel& l) { return l.slot.index == 5; });
    REQUIRE(pair_own != pair.labels.end());
    REQUIRE(solo_own != solo.labels.end());
    CHECK(pair_own->target == doctest::Approx(solo_own->target).epsilon(1e-15));
  }

  SUBCASE("off-center targets increase strictly with sigma") {
    double prev = 0.0;
    for (double sigma : {60.0, 120.0, 210.0, 400.0, 1000.0}) {
      label::SmoothingConfig c{sigma, 1};
      const auto build = label::smooth({session("S1", "2022-03-04T12:50", 0.35)}, c);
      const auto own = std::find_if(build.labels.begin(), build.labels.end(),
                                    [](const label::SlotLabel& l) { return l.slot.index == 6; });
      REQUIRE(own != build.labels.end());
      CHECK(own->target > prev);
      prev = own->target;
    }
  }

  SUBCASE("smoothing labels at least the raw cells, and more on sparse data") {
    core::Rng rng(79);
    std::vector<label::SessionRate> sessions;
    for (int i = 0; i < 12; ++i) {
      sessions.push_back(
          {"S1",
           core::DateTime{core::add_days(core::Date{2022, 3, 1}, static_cast<int>(rng.uniform_int(0, 4))),
                          static_cast<int>(rng.uniform_int(420, 1140))},
           rng.uniform()});
    }
    const auto raw = label::assign_raw(sessions);
    const auto smoothed = label::smooth(sessions, cfg);
    CHECK(smoothed.labels.size() >= raw.labels.size());
    CHECK(smoothed.labels.size() > raw.labels.size());  // sparse sessions gain neighbors
  }

  SUBCASE("huge sigma with no neighbors degenerates to raw assignment") {
    label::SmoothingConfig degenerate{1e18, 0};
    // Distinct single-session cells away from slot boundaries.
    const std::vector<label::SessionRate> sessions = {session("S1", "2022-03-04T08:20", 0.2),
                                                      session("S1", "2022-03-04T11:40", 0.6),
                                                      session("S1", "2022-03-04T16:05", 0.9)};
    const auto raw = label::assign_raw(sessions).labels;
    const auto smoothed = label::smooth(sessions, degenerate).labels;
    REQUIRE(raw.size() == smoothed.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      CHECK(raw[i].slot == smoothed[i].slot);
      CHECK(std::abs(raw[i].target - smoothed[i].target) <= 1e-12);
    }
  }
}

TEST_CASE("spatial_stats aggregates per sector") {
  const core::SectorSet sectors = core::SectorSet::from_rows(
      {{"S1", 40.64, 22.94, 10}, {"S2", 40.65, 22.95, 8}, {"S3", 40.66, 22.96, 8}});

  std::vector<label::SlotLabel> labels = {
      {"S1", {core::Date{2022, 3, 4}, 0}, 0.2, 1},
      {"S1", {core::Date{2022, 3, 4}, 1}, 0.4, 1},
      {"S2", {core::Date{2022, 3, 4}, 0}, 0.8, 2},
  };
  const label::SpatialStats stats = label::spatial_stats(labels, sectors);
  REQUIRE(stats.sectors.size() == 2);  // S3 has no labels
  CHECK(stats.sectors[0].sector_id == "S1");
  CHECK(stats.sectors[0].mean_rate == doctest::Approx(0.3));
  CHECK(stats.sectors[1].mean_rate == doctest::Approx(0.8));
  CHECK(stats.global_mean == doctest::Approx((0.2 + 0.4 + 0.8) / 3.0));
  CHECK(stats.min_sector_mean == doctest::Approx(0.3));
  CHECK(stats.max_sector_mean == doctest::Approx(0.8));

  SUBCASE("constant labels give constant means") {
    for (auto& l : labels) l.target = 0.5;
    const label::SpatialStats constant = label::spatial_stats(labels, sectors);
    for (const auto& sm : constant.sectors) {
      CHECK(sm.mean_rate == 0.5);
    }
    CHECK(constant.global_mean == 0.5);
  }

  CHECK_THROWS_AS(label::spatial_stats({}, sectors), core::ValidationError);
}

TEST_CASE("labels round-trip through labels.csv") {
  const std::vector<label::SlotLabel> labels = {{"S1", {core::Date{2022, 3, 4}, 5}, 0.2893, 1},
                                                {"S2", {core::Date{2022, 3, 5}, 0}, 1.0, 3}};
  const auto path = std::filesystem::temp_directory_path() / "parkcast_labels_test.csv";
  label::save_labels(labels, path);
  const auto loaded = label::load_labels(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].target == 0.2893);
  CHECK(loaded[1].support == 3);
  CHECK(loaded[1].slot.date == core::Date{2022, 3, 5});
}
