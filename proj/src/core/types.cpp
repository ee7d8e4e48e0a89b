#include "parkcast/core/types.hpp"

#include "parkcast/core/error.hpp"

namespace parkcast::core {

SectorSet SectorSet::from_rows(std::vector<Sector> rows) {
  SectorSet set;
  set.items_ = std::move(rows);
  set.index_.reserve(set.items_.size());
  for (size_t i = 0; i < set.items_.size(); ++i) {
    const Sector& s = set.items_[i];
    if (s.id.empty()) {
      throw ValidationError("sector id must be nonempty");
    }
    if (s.capacity < 1) {
      throw ValidationError("sector '" + s.id + "': capacity must be >= 1");
    }
    if (s.center_lat < -90.0 || s.center_lat > 90.0 || s.center_lon < -180.0 || s.center_lon > 180.0) {
      throw ValidationError("sector '" + s.id + "': coordinates out of range");
    }
    if (!set.index_.emplace(s.id, i).second) {
      throw ValidationError("duplicate sector id '" + s.id + "'");
    }
  }
  return set;
}

const Sector* SectorSet::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &items_[it->second];
}

const Sector& SectorSet::at(std::string_view id) const {
  const Sector* s = find(id);
  if (s == nullptr) {
    throw ValidationError("unknown sector id '" + std::string(id) + "'");
  }
  return *s;
}

CalendarTable::CalendarTable(const std::vector<CalendarInfo>& records) {
  by_day_.reserve(records.size());
  for (const CalendarInfo& rec : records) {
    if (!by_day_.emplace(to_day_number(rec.date), rec).second) {
      throw ValidationError("duplicate calendar record for " + format_date(rec.date));
    }
  }
}

const CalendarInfo* CalendarTable::find(const Date& d) const {
  const auto it = by_day_.find(to_day_number(d));
  return it == by_day_.end() ? nullptr : &it->second;
}

const CalendarInfo& CalendarTable::at(const Date& d) const {
  const CalendarInfo* rec = find(d);
  if (rec == nullptr) {
    throw ValidationError("no calendar record for " + format_date(d));
  }
  return *rec;
}

namespace {

void check_slot_index(int index) {
  if (index < 0 || index >= kSlotsPerDay) {
    throw ValidationError("time-slot index " + std::to_string(index) + " out of range [0, 11]");
  }
}

}  // namespace

DateTime slot_center(const TimeSlot& slot) {
  check_slot_index(slot.index);
  return DateTime{slot.date, kEnforcementStartMinute + 30 + slot.index * 60};
}

DateTime slot_start(const TimeSlot& slot) {
  check_slot_index(slot.index);
  return DateTime{slot.date, kEnforcementStartMinute + slot.index * 60};
}

int slot_index_of_minute(int minute_of_day) {
  if (minute_of_day < kEnforcementStartMinute || minute_of_day > kEnforcementEndMinute) {
    return -1;
  }
  if (minute_of_day == kEnforcementEndMinute) {
    return kSlotsPerDay - 1;
  }
  return (minute_of_day - kEnforcementStartMinute) / 60;
}

}  // namespace parkcast::core
