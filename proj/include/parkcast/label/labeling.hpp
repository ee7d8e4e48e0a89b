#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "parkcast/core/types.hpp"

namespace parkcast::label {

/// Observed violation rate of one scanning session.
struct SessionRate {
  std::string sector_id;
  core::DateTime midpoint;
  double rate{};  // violations / capacity, clamped to [0, 1]
};

/// Violation-rate target for one (sector, date, slot) cell. Cells without
/// any contributing session are absent, never zero.
struct SlotLabel {
  std::string sector_id;
  core::TimeSlot slot;
  double target{};
  int support{};  // contributing sessions
};

struct SmoothingConfig {
  double sigma_minutes{210.0};
  int neighbor_slots{1};
};

/// Merges raw scan rows of the same sector whose timestamps fall within
/// `max_gap_minutes` of the previous scan into one session. Counts are
/// summed; the midpoint is the mean scan time rounded to the minute.
std::vector<core::ScanSession> group_scans(std::vector<core::ScanSession> scans, int max_gap_minutes = 15);

/// Observed rate of one session: violations / sector capacity, clamped to
/// [0, 1] (illegally parked cars can exceed marked capacity).
SessionRate session_rate(const core::ScanSession& scan, const core::Sector& sector);

struct LabelBuild {
  std::vector<SlotLabel> labels;
  int dropped_out_of_hours{};
};

/// Each session goes to the slot whose center is nearest its midpoint
/// (tie -> earlier slot); sessions sharing a cell average their rates.
/// Sessions outside enforcement hours are dropped and counted.
LabelBuild assign_raw(const std::vector<SessionRate>& sessions);

/// Distributes each session's rate into its own and the `neighbor_slots`
/// adjacent slots with weight exp(-d/sigma), d = |midpoint - slot center|
/// in minutes; a cell's target is the weighted values averaged over its
/// contributing sessions, clamped to [0, 1].
LabelBuild smooth(const std::vector<SessionRate>& sessions, const SmoothingConfig& cfg);

struct SectorMean {
  std::string sector_id;
  double mean_rate{};
  int n_labels{};
};

struct SpatialStats {
  std::vector<SectorMean> sectors;  // SectorSet order, labeled sectors only
  double global_mean{};             // over all labels
  double min_sector_mean{};
  double max_sector_mean{};
};

/// Per-sector mean targets plus global statistics. Throws on empty labels.
SpatialStats spatial_stats(const std::vector<SlotLabel>& labels, const core::SectorSet& sectors);

/// `labels.csv`: sector_id,date,slot,target,support
void save_labels(const std::vector<SlotLabel>& labels, const std::filesystem::path& path);
std::vector<SlotLabel> load_labels(const std::filesystem::path& path);

/// Sector-level statistics as CSV (`sector_id,lat,lon,n_labels,mean_rate`)
/// and as a GeoJSON FeatureCollection of sector-center points.
void save_spatial_stats_csv(const SpatialStats& stats, const core::SectorSet& sectors,
                            const std::filesystem::path& path);
void save_spatial_stats_geojson(const SpatialStats& stats, const core::SectorSet& sectors,
                                const std::filesystem::path& path);

}  // namespace parkcast::label
