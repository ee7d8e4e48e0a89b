#include "parkcast/label/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include <json.hpp>

#include "parkcast/core/csv.hpp"
#include "parkcast/core/error.hpp"

namespace parkcast::label {

namespace {

// (sector, day number, slot) -> deterministic cell ordering.
using CellKey = std::tuple<std::string, std::int64_t, int>;

int slot_center_minute(int slot_index) {
  return core::kEnforcementStartMinute + 30 + slot_index * 60;
}

}  // namespace

std::vector<core::ScanSession> group_scans(std::vector<core::ScanSession> scans, int max_gap_minutes) {
  std::stable_sort(scans.begin(), scans.end(), [](const core::ScanSession& a, const core::ScanSession& b) {
    if (a.sector_id != b.sector_id) return a.sector_id < b.sector_id;
    return a.timestamp < b.timestamp;
  });

  std::vector<core::ScanSession> sessions;
  size_t i = 0;
  while (i < scans.size()) {
    size_t j = i + 1;
    std::int64_t minute_sum = core::to_minute_number(scans[i].timestamp);
    std::int64_t prev_minute = minute_sum;
    int cars = scans[i].cars_scanned;
    int violations = scans[i].violations;
    while (j < scans.size() && scans[j].sector_id == scans[i].sector_id) {
      const std::int64_t m = core::to_minute_number(scans[j].timestamp);
      if (m - prev_minute > max_gap_minutes) break;
      minute_sum += m;
      prev_minute = m;
      cars += scans[j].cars_scanned;
      violations += scans[j].violations;
      ++j;
    }
    const auto count = static_cast<std::int64_t>(j - i);
    const auto mid = static_cast<std::int64_t>(
        std::llround(static_cast<double>(minute_sum) / static_cast<double>(count)));
    sessions.push_back(core::ScanSession{scans[i].sector_id, core::from_minute_number(mid), cars, violations});
    i = j;
  }
  return sessions;
}

SessionRate session_rate(const core::ScanSession& scan, const core::Sector& sector) {
  if (scan.sector_id != sector.id) {
    throw core::ValidationError("scan sector '" + scan.sector_id + "' does not match sector '" + sector.id +
                                "'");
  }
  const double p = static_cast<double>(scan.violations) / static_cast<double>(sector.capacity);
  return SessionRate{scan.sector_id, scan.timestamp, std::clamp(p, 0.0, 1.0)};
}

LabelBuild assign_raw(const std::vector<SessionRate>& sessions) {
  struct Cell {
    double rate_sum{};
    int count{};
  };
  std::map<CellKey, Cell> cells;
  LabelBuild out;

  for (const SessionRate& s : sessions) {
    const int m = s.midpoint.minute_of_day;
    if (m < core::kEnforcementStartMinute || m > core::kEnforcementEndMinute) {
      ++out.dropped_out_of_hours;
      continue;
    }
    // Nearest slot center; equidistant midpoints take the earlier slot.
    int k = std::clamp((m - core::kEnforcementStartMinute - 30) / 60, 0, core::kSlotsPerDay - 1);
    const int k_next = std::min(k + 1, core::kSlotsPerDay - 1);
    if (std::abs(m - slot_center_minute(k_next)) < std::abs(m - slot_center_minute(k))) {
      k = k_next;
    }
    Cell& cell = cells[CellKey{s.sector_id, core::to_day_number(s.midpoint.date), k}];
    cell.rate_sum += s.rate;
    cell.count += 1;
  }

  for (const auto& [key, cell] : cells) {
    const auto& [sector_id, day, slot] = key;
    out.labels.push_back(SlotLabel{sector_id, core::TimeSlot{core::from_day_number(day), slot},
                                   cell.rate_sum / cell.count, cell.count});
  }
  return out;
}

LabelBuild smooth(const std::vector<SessionRate>& sessions, const SmoothingConfig& cfg) {
  if (!(cfg.sigma_minutes > 0.0)) {
    throw core::ValidationError("sigma_minutes must be positive");
  }
  if (cfg.neighbor_slots < 0) {
    throw core::ValidationError("neighbor_slots must be nonnegative");
  }

  struct Cell {
    double weighted_sum{};
    int count{};
  };
  std::map<CellKey, Cell> cells;
  LabelBuild out;

  for (const SessionRate& s : sessions) {
    const int m = s.midpoint.minute_of_day;
    const int own_slot = core::slot_index_of_minute(m);
    if (own_slot < 0) {
      ++out.dropped_out_of_hours;
      continue;
    }
    const std::int64_t day = core::to_day_number(s.midpoint.date);
    const int lo = std::max(0, own_slot - cfg.neighbor_slots);
    const int hi = std::min(core::kSlotsPerDay - 1, own_slot + cfg.neighbor_slots);
    for (int t = lo; t <= hi; ++t) {
      const double d = std::abs(m - slot_center_minute(t));
      Cell& cell = cells[CellKey{s.sector_id, day, t}];
      cell.weighted_sum += std::exp(-d / cfg.sigma_minutes) * s.rate;
      cell.count += 1;
    }
  }

  for (const auto& [key, cell] : cells) {
    const auto& [sector_id, day, slot] = key;
    const double y = std::clamp(cell.weighted_sum / cell.count, 0.0, 1.0);
    out.labels.push_back(SlotLabel{sector_id, core::TimeSlot{core::from_day_number(day), slot}, y, cell.count});
  }
  return out;
}

SpatialStats spatial_stats(const std::vector<SlotLabel>& labels, const core::SectorSet& sectors) {
  if (labels.empty()) {
    throw core::ValidationError("spatial_stats: empty label set");
  }
  struct Acc {
    double sum{};
    int n{};
  };
  std::map<std::string, Acc> by_sector;
  double global_sum = 0.0;
  for (const SlotLabel& l : labels) {
    sectors.at(l.sector_id);  // unknown sector ids are an error
    Acc& acc = by_sector[l.sector_id];
    acc.sum += l.target;
    acc.n += 1;
    global_sum += l.target;
  }

  SpatialStats stats;
  stats.global_mean = global_sum / static_cast<double>(labels.size());
  stats.min_sector_mean = 2.0;
  stats.max_sector_mean = -1.0;
  for (const core::Sector& s : sectors.items()) {
    const auto it = by_sector.find(s.id);
    if (it == by_sector.end()) continue;
    const double mean = it->second.sum / it->second.n;
    stats.sectors.push_back(SectorMean{s.id, mean, it->second.n});
    stats.min_sector_mean = std::min(stats.min_sector_mean, mean);
    stats.max_sector_mean = std::max(stats.max_sector_mean, mean);
  }
  return stats;
}

void save_labels(const std::vector<SlotLabel>& labels, const std::filesystem::path& path) {
  core::CsvWriter writer(path, {"sector_id", "date", "slot", "target", "support"});
  for (const SlotLabel& l : labels) {
    writer.row({l.sector_id, core::format_date(l.slot.date), std::to_string(l.slot.index),
                core::format_double(l.target), std::to_string(l.support)});
  }
  writer.close();
}

std::vector<SlotLabel> load_labels(const std::filesystem::path& path) {
  core::CsvReader reader(path, {"sector_id", "date", "slot", "target", "support"});
  std::vector<SlotLabel> labels;
  std::vector<std::string> f;
  while (reader.next(f)) {
    SlotLabel l;
    l.sector_id = f[0];
    const std::string context = path.string() + ":" + std::to_string(reader.line());
    try {
      l.slot.date = core::parse_date(f[1]);
    } catch (const core::ParseError& e) {
      reader.fail(e.what());
    }
    l.slot.index = static_cast<int>(core::parse_long_field(f[2], context));
    if (l.slot.index < 0 || l.slot.index >= core::kSlotsPerDay) reader.fail("slot out of range [0, 11]");
    l.target = core::parse_double_field(f[3], context);
    if (l.target < 0.0 || l.target > 1.0) reader.fail("target out of [0, 1]");
    l.support = static_cast<int>(core::parse_long_field(f[4], context));
    if (l.support < 1) reader.fail("support must be >= 1");
    labels.push_back(std::move(l));
  }
  return labels;
}

void save_spatial_stats_csv(const SpatialStats& stats, const core::SectorSet& sectors,
                            const std::filesystem::path& path) {
  core::CsvWriter writer(path, {"sector_id", "lat", "lon", "n_labels", "mean_rate"});
  for (const SectorMean& sm : stats.sectors) {
    const core::Sector& s = sectors.at(sm.sector_id);
    writer.row({sm.sector_id, core::format_double(s.center_lat), core::format_double(s.center_lon),
                std::to_string(sm.n_labels), core::format_double(sm.mean_rate)});
  }
  writer.close();
}

void save_spatial_stats_geojson(const SpatialStats& stats, const core::SectorSet& sectors,
                                const std::filesystem::path& path) {
  nlohmann::json features = nlohmann::json::array();
  for (const SectorMean& sm : stats.sectors) {
    const core::Sector& s = sectors.at(sm.sector_id);
    nlohmann::json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Point"}, {"coordinates", {s.center_lon, s.center_lat}}};
    feature["properties"] = {
        {"sector_id", sm.sector_id}, {"mean_rate", sm.mean_rate}, {"n_labels", sm.n_labels}};
    features.push_back(std::move(feature));
  }
  nlohmann::json doc;
  doc["type"] = "FeatureCollection";
  doc["properties"] = {{"global_mean_rate", stats.global_mean},
                       {"min_sector_mean", stats.min_sector_mean},
                       {"max_sector_mean", stats.max_sector_mean}};
  doc["features"] = std::move(features);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw core::Error("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

}  // namespace parkcast::label
