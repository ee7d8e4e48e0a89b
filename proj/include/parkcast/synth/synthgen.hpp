#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "parkcast/core/io.hpp"
#include "parkcast/core/types.hpp"

namespace parkcast::synth {

/// Synthetic-city generator settings. The calibration targets mirror the
/// published statistics of the deployment this generator stands in for:
/// 396 sectors averaging 11 slots, global mean violation rate 0.41, sector
/// means spanning roughly [0.1, 0.78], higher rates in remote sectors.
struct GeneratorConfig {
  int n_sectors{396};
  double mean_capacity{11.0};
  int n_pois{19};
  int n_days{180};
  double scan_coverage{0.15};  // probability a (sector, day, slot) cell is scanned
  std::uint64_t seed{0};
  core::Date start_date{2022, 1, 1};
  double lat_min{40.60};
  double lat_max{40.66};
  double lon_min{22.93};
  double lon_max{22.985};
  double target_global_mean{0.41};
  double holiday_probability{0.04};

  void validate() const;
};

/// Complete true-rate table over sectors x days x slots; the evaluation
/// oracle that observed labels only sample noisily.
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(std::vector<std::string> sector_ids, core::Date start_date, int n_days);

  /// Rebuilds a lookup table from truth.csv rows.
  static GroundTruth from_cells(const std::vector<core::CellRate>& cells);

  void set(int sector_index, int day_offset, int slot, double rate);
  double at(const std::string& sector_id, const core::Date& date, int slot) const;  // throws if absent
  bool contains(const std::string& sector_id, const core::Date& date, int slot) const;

  /// All cells in (sector, date, slot) order, for truth.csv emission.
  std::vector<core::CellRate> cells() const;

  size_t cell_count() const { return rates_.size(); }

 private:
  size_t flat_index(size_t sector_index, int day_offset, int slot) const;
  const double* lookup(const std::string& sector_id, const core::Date& date, int slot) const;

  std::vector<std::string> sector_ids_;
  std::unordered_map<std::string, size_t> sector_index_;
  core::Date start_date_{};
  int n_days_{0};
  std::vector<double> rates_;
};

struct Corpus {
  core::SectorSet sectors;
  core::PoiSet pois;
  core::WeatherSeries weather;
  std::vector<core::CalendarInfo> calendar;
  std::vector<core::ScanSession> scans;
  GroundTruth truth;
};

/// Deterministic corpus: true rates combine a Beta-distributed sector base,
/// a remoteness offset, a midday bump, weekday/weather/holiday terms and
/// cell noise; each scanned cell observes Binomial(capacity, rate)
/// violations at a uniform minute inside the slot.
Corpus generate(const GeneratorConfig& cfg);

/// MAE of predictions against the true rates (not the noisy labels).
/// Throws when no prediction matches a truth cell.
double oracle_mae(const std::vector<core::CellRate>& predictions, const GroundTruth& truth);

}  // namespace parkcast::synth
