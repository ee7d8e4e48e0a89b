#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parkcast/core/time.hpp"

namespace parkcast::core {

/// Geographic unit for which violation rates are predicted.
struct Sector {
  std::string id;
  double center_lat{};  // degrees WGS84
  double center_lon{};
  int capacity{};  // parking slots, >= 1
};

/// Ordered sector collection with unique ids. Row order is preserved.
class SectorSet {
 public:
  SectorSet() = default;

  /// Validates ids (unique, nonempty), coordinates and capacity.
  static SectorSet from_rows(std::vector<Sector> rows);

  const Sector* find(std::string_view id) const;
  const Sector& at(std::string_view id) const;  // throws ValidationError if absent
  const std::vector<Sector>& items() const { return items_; }
  size_t size() const { return items_.size(); }

 private:
  std::vector<Sector> items_;
  std::unordered_map<std::string, size_t> index_;
};

struct Poi {
  std::string name;
  double lat{};
  double lon{};
};

/// Ordered landmark list; row order defines feature-vector column order.
struct PoiSet {
  std::vector<Poi> items;

  size_t size() const { return items.size(); }
};

/// One enforcement pass over one sector.
struct ScanSession {
  std::string sector_id;
  DateTime timestamp;  // session midpoint, minute precision
  int cars_scanned{};
  int violations{};
};

struct WeatherSample {
  DateTime timestamp;  // on the hour
  double temperature_c{};
  double humidity_pct{};  // 0..100
};

/// Hourly weather sequence; strictly increasing timestamps, gaps flagged.
struct WeatherSeries {
  std::vector<WeatherSample> samples;
  bool has_gaps{};
};

struct CalendarInfo {
  Date date;
  bool is_holiday{};
  bool is_pandemic{};
};

/// Date-indexed calendar lookup. Missing dates are an error, never a default.
class CalendarTable {
 public:
  CalendarTable() = default;
  explicit CalendarTable(const std::vector<CalendarInfo>& records);

  const CalendarInfo* find(const Date& d) const;
  const CalendarInfo& at(const Date& d) const;  // throws ValidationError if absent

 private:
  std::unordered_map<std::int64_t, CalendarInfo> by_day_;
};

// Parking control is enforced 07:00-19:00, one-hour slots.
inline constexpr int kSlotsPerDay = 12;
inline constexpr int kEnforcementStartMinute = 7 * 60;
inline constexpr int kEnforcementEndMinute = 19 * 60;

/// One-hour prediction cell: slot 0 = 07:00-08:00 .. slot 11 = 18:00-19:00.
struct TimeSlot {
  Date date;
  int index{};  // 0..11

  auto operator<=>(const TimeSlot&) const = default;
};

/// Slot midpoint: 07:30 + index hours. Throws ValidationError on bad index.
DateTime slot_center(const TimeSlot& slot);

/// Slot start: 07:00 + index hours.
DateTime slot_start(const TimeSlot& slot);

/// Slot whose [start, end) interval contains the minute-of-day, or -1 when
/// outside enforcement hours. Minute 19:00 exactly maps to the last slot.
int slot_index_of_minute(int minute_of_day);

}  // namespace parkcast::core
