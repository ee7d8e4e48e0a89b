#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "parkcast/core/types.hpp"

namespace parkcast::core {

// Canonical CSV interchange formats. All files are UTF-8, LF line endings,
// '.' decimal separator, exact headers as documented in the README.

/// `id,lat,lon,capacity`
SectorSet load_sectors(const std::filesystem::path& path);
void save_sectors(const SectorSet& sectors, const std::filesystem::path& path);

/// `name,lat,lon`; row order = feature order
PoiSet load_pois(const std::filesystem::path& path);
void save_pois(const PoiSet& pois, const std::filesystem::path& path);

/// `sector_id,timestamp,cars_scanned,violations`, timestamp YYYY-MM-DDTHH:MM.
/// Result is sorted chronologically (ties keep file order).
std::vector<ScanSession> load_scans(const std::filesystem::path& path);
void save_scans(const std::vector<ScanSession>& scans, const std::filesystem::path& path);

/// `timestamp,temperature_c,humidity_pct`, hourly cadence. Timestamps must be
/// strictly increasing and on the hour; gaps are permitted but set has_gaps.
WeatherSeries load_weather(const std::filesystem::path& path);
void save_weather(const WeatherSeries& series, const std::filesystem::path& path);

/// `date,is_holiday,is_pandemic` with 0/1 flags, sorted by date on load.
std::vector<CalendarInfo> load_calendar(const std::filesystem::path& path);
void save_calendar(const std::vector<CalendarInfo>& records, const std::filesystem::path& path);

/// A (sector, date, slot) cell carrying one value; used for truth.csv
/// (`true_rate`) and predictions.csv (`predicted_rate`).
struct CellRate {
  std::string sector_id;
  Date date;
  int slot{};
  double value{};
};

std::vector<CellRate> load_cell_rates(const std::filesystem::path& path, const std::string& value_column);
void save_cell_rates(const std::vector<CellRate>& cells, const std::filesystem::path& path,
                     const std::string& value_column);

}  // namespace parkcast::core
