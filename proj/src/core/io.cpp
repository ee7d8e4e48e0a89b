#include "parkcast/core/io.hpp"

#include <algorithm>

#include "parkcast/core/csv.hpp"
#include "parkcast/core/error.hpp"

namespace parkcast::core {

namespace {

std::string ctx(const CsvReader& reader) {
  return reader.path().string() + ":" + std::to_string(reader.line());
}

int parse_bounded_int(const std::string& text, const CsvReader& reader, const char* what, long lo, long hi) {
  const long v = parse_long_field(text, ctx(reader));
  if (v < lo || v > hi) {
    reader.fail(std::string(what) + " " + text + " out of range [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

bool parse_flag(const std::string& text, const CsvReader& reader, const char* what) {
  if (text == "0") return false;
  if (text == "1") return true;
  reader.fail(std::string(what) + " must be 0 or 1, got '" + text + "'");
}

}  // namespace

SectorSet load_sectors(const std::filesystem::path& path) {
  CsvReader reader(path, {"id", "lat", "lon", "capacity"});
  std::vector<Sector> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    Sector s;
    s.id = f[0];
    s.center_lat = parse_double_field(f[1], ctx(reader));
    s.center_lon = parse_double_field(f[2], ctx(reader));
    const long capacity = parse_long_field(f[3], ctx(reader));
    if (s.id.empty()) reader.fail("empty sector id");
    if (capacity < 1) reader.fail("capacity must be >= 1");
    if (s.center_lat < -90.0 || s.center_lat > 90.0) reader.fail("latitude out of [-90, 90]");
    if (s.center_lon < -180.0 || s.center_lon > 180.0) reader.fail("longitude out of [-180, 180]");
    s.capacity = static_cast<int>(capacity);
    rows.push_back(std::move(s));
  }
  try {
    return SectorSet::from_rows(std::move(rows));
  } catch (const ValidationError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_sectors(const SectorSet& sectors, const std::filesystem::path& path) {
  CsvWriter writer(path, {"id", "lat", "lon", "capacity"});
  for (const Sector& s : sectors.items()) {
    writer.row({s.id, format_double(s.center_lat), format_double(s.center_lon), std::to_string(s.capacity)});
  }
  writer.close();
}

PoiSet load_pois(const std::filesystem::path& path) {
  CsvReader reader(path, {"name", "lat", "lon"});
  PoiSet pois;
  std::vector<std::string> f;
  while (reader.next(f)) {
    Poi p;
    p.name = f[0];
    p.lat = parse_double_field(f[1], ctx(reader));
    p.lon = parse_double_field(f[2], ctx(reader));
    if (p.name.empty()) reader.fail("empty PoI name");
    if (p.lat < -90.0 || p.lat > 90.0) reader.fail("latitude out of [-90, 90]");
    if (p.lon < -180.0 || p.lon > 180.0) reader.fail("longitude out of [-180, 180]");
    pois.items.push_back(std::move(p));
  }
  return pois;
}

void save_pois(const PoiSet& pois, const std::filesystem::path& path) {
  CsvWriter writer(path, {"name", "lat", "lon"});
  for (const Poi& p : pois.items) {
    writer.row({p.name, format_double(p.lat), format_double(p.lon)});
  }
  writer.close();
}

std::vector<ScanSession> load_scans(const std::filesystem::path& path) {
  CsvReader reader(path, {"sector_id", "timestamp", "cars_scanned", "violations"});
  std::vector<ScanSession> scans;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ScanSession s;
    s.sector_id = f[0];
    try {
      s.timestamp = parse_datetime(f[1]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    s.cars_scanned = parse_bounded_int(f[2], reader, "cars_scanned", 0, 1000000);
    s.violations = parse_bounded_int(f[3], reader, "violations", 0, 1000000);
    if (s.sector_id.empty()) reader.fail("empty sector_id");
    if (s.violations > s.cars_scanned) {
      reader.fail("violations " + f[3] + " exceed cars_scanned " + f[2]);
    }
    scans.push_back(std::move(s));
  }
  std::stable_sort(scans.begin(), scans.end(),
                   [](const ScanSession& a, const ScanSession& b) { return a.timestamp < b.timestamp; });
  return scans;
}

void save_scans(const std::vector<ScanSession>& scans, const std::filesystem::path& path) {
  CsvWriter writer(path, {"sector_id", "timestamp", "cars_scanned", "violations"});
  for (const ScanSession& s : scans) {
    writer.row({s.sector_id, format_datetime(s.timestamp), std::to_string(s.cars_scanned),
                std::to_string(s.violations)});
  }
  writer.close();
}

WeatherSeries load_weather(const std::filesystem::path& path) {
  CsvReader reader(path, {"timestamp", "temperature_c", "humidity_pct"});
  WeatherSeries series;
  std::vector<std::string> f;
  while (reader.next(f)) {
    WeatherSample w;
    try {
      w.timestamp = parse_datetime(f[0]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    if (w.timestamp.minute_of_day % 60 != 0) {
      reader.fail("weather timestamp '" + f[0] + "' is not on the hour");
    }
    w.temperature_c = parse_double_field(f[1], ctx(reader));
    w.humidity_pct = parse_double_field(f[2], ctx(reader));
    if (w.humidity_pct < 0.0 || w.humidity_pct > 100.0) reader.fail("humidity out of [0, 100]");
    if (!series.samples.empty()) {
      const std::int64_t prev = to_minute_number(series.samples.back().timestamp);
      const std::int64_t cur = to_minute_number(w.timestamp);
      if (cur <= prev) {
        reader.fail("weather timestamps must be strictly increasing");
      }
      if (cur - prev != 60) {
        series.has_gaps = true;
      }
    }
    series.samples.push_back(w);
  }
  return series;
}

void save_weather(const WeatherSeries& series, const std::filesystem::path& path) {
  CsvWriter writer(path, {"timestamp", "temperature_c", "humidity_pct"});
  for (const WeatherSample& w : series.samples) {
    writer.row({format_datetime(w.timestamp), format_double(w.temperature_c), format_double(w.humidity_pct)});
  }
  writer.close();
}

std::vector<CalendarInfo> load_calendar(const std::filesystem::path& path) {
  CsvReader reader(path, {"date", "is_holiday", "is_pandemic"});
  std::vector<CalendarInfo> records;
  std::vector<std::string> f;
  while (reader.next(f)) {
    CalendarInfo rec;
    try {
      rec.date = parse_date(f[0]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    rec.is_holiday = parse_flag(f[1], reader, "is_holiday");
    rec.is_pandemic = parse_flag(f[2], reader, "is_pandemic");
    records.push_back(rec);
  }
  std::sort(records.begin(), records.end(),
            [](const CalendarInfo& a, const CalendarInfo& b) { return a.date < b.date; });
  for (size_t i = 1; i < records.size(); ++i) {
    if (records[i].date == records[i - 1].date) {
      throw ParseError(path.string() + ": duplicate calendar record for " + format_date(records[i].date));
    }
  }
  return records;
}

void save_calendar(const std::vector<CalendarInfo>& records, const std::filesystem::path& path) {
  CsvWriter writer(path, {"date", "is_holiday", "is_pandemic"});
  for (const CalendarInfo& rec : records) {
    writer.row({format_date(rec.date), rec.is_holiday ? "1" : "0", rec.is_pandemic ? "1" : "0"});
  }
  writer.close();
}

std::vector<CellRate> load_cell_rates(const std::filesystem::path& path, const std::string& value_column) {
  CsvReader reader(path, {"sector_id", "date", "slot", value_column});
  std::vector<CellRate> cells;
  std::vector<std::string> f;
  while (reader.next(f)) {
    CellRate c;
    c.sector_id = f[0];
    try {
      c.date = parse_date(f[1]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    c.slot = parse_bounded_int(f[2], reader, "slot", 0, kSlotsPerDay - 1);
    c.value = parse_double_field(f[3], ctx(reader));
    cells.push_back(std::move(c));
  }
  return cells;
}

void save_cell_rates(const std::vector<CellRate>& cells, const std::filesystem::path& path,
                     const std::string& value_column) {
  CsvWriter writer(path, {"sector_id", "date", "slot", value_column});
  for (const CellRate& c : cells) {
    writer.row({c.sector_id, format_date(c.date), std::to_string(c.slot), format_double(c.value)});
  }
  writer.close();
}

}  // namespace parkcast::core
