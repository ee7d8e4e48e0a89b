#include "parkcast/synth/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "parkcast/core/error.hpp"
#include "parkcast/core/geo.hpp"
#include "parkcast/core/rng.hpp"

namespace parkcast::synth {

namespace {

// True-rate model coefficients. The level adjustment re-centers the sum of
// the positive-mean terms so the global mean lands on the calibration target.
constexpr double kBetaA = 6.5;
constexpr double kBetaB = 9.3;
constexpr double kRemoteGain = 0.14;
constexpr double kTodAmplitude = 0.10;
constexpr double kWeekdayAmplitude = 0.04;
constexpr double kWeatherGain = 0.004;  // per degree C of deviation
constexpr double kHolidayBoost = 0.08;
constexpr double kPandemicDrop = -0.10;
constexpr double kCellNoiseSigma = 0.03;

constexpr std::uint64_t kStreamSectors = 1;
constexpr std::uint64_t kStreamPois = 2;
constexpr std::uint64_t kStreamWeather = 3;
constexpr std::uint64_t kStreamCalendar = 4;
constexpr std::uint64_t kStreamRates = 5;
constexpr std::uint64_t kStreamScans = 6;

double tod_bump(int slot) { return std::sin(M_PI * slot / 11.0); }

}  // namespace

void GeneratorConfig::validate() const {
  if (n_sectors < 1) throw core::ValidationError("n_sectors must be >= 1");
  if (n_pois < 1) throw core::ValidationError("n_pois must be >= 1");
  if (n_days < 1) throw core::ValidationError("n_days must be >= 1");
  if (scan_coverage < 0.0 || scan_coverage > 1.0) {
    throw core::ValidationError("scan_coverage must be in [0, 1]");
  }
  if (!(mean_capacity >= 1.0)) throw core::ValidationError("mean_capacity must be >= 1");
  if (!(lat_min < lat_max && lon_min < lon_max)) {
    throw core::ValidationError("bounding box is empty");
  }
}

GroundTruth::GroundTruth(std::vector<std::string> sector_ids, core::Date start_date, int n_days)
    : sector_ids_(std::move(sector_ids)), start_date_(start_date), n_days_(n_days) {
  for (size_t i = 0; i < sector_ids_.size(); ++i) {
    sector_index_.emplace(sector_ids_[i], i);
  }
  rates_.assign(sector_ids_.size() * static_cast<size_t>(n_days_) * core::kSlotsPerDay, 0.0);
}

GroundTruth GroundTruth::from_cells(const std::vector<core::CellRate>& cells) {
  if (cells.empty()) {
    throw core::ValidationError("ground truth: empty cell list");
  }
  core::Date lo = cells.front().date;
  core::Date hi = cells.front().date;
  std::vector<std::string> ids;
  std::unordered_map<std::string, bool> seen;
  for (const core::CellRate& c : cells) {
    lo = std::min(lo, c.date);
    hi = std::max(hi, c.date);
    if (!seen.count(c.sector_id)) {
      seen.emplace(c.sector_id, true);
      ids.push_back(c.sector_id);
    }
  }
  const int n_days = static_cast<int>(core::to_day_number(hi) - core::to_day_number(lo)) + 1;
  GroundTruth truth(std::move(ids), lo, n_days);
  for (const core::CellRate& c : cells) {
    const int day = static_cast<int>(core::to_day_number(c.date) - core::to_day_number(lo));
    truth.set(static_cast<int>(truth.sector_index_.at(c.sector_id)), day, c.slot, c.value);
  }
  return truth;
}

size_t GroundTruth::flat_index(size_t sector_index, int day_offset, int slot) const {
  return (sector_index * static_cast<size_t>(n_days_) + static_cast<size_t>(day_offset)) *
             core::kSlotsPerDay +
         static_cast<size_t>(slot);
}

void GroundTruth::set(int sector_index, int day_offset, int slot, double rate) {
  rates_[flat_index(static_cast<size_t>(sector_index), day_offset, slot)] = rate;
}

const double* GroundTruth::lookup(const std::string& sector_id, const core::Date& date, int slot) const {
  const auto it = sector_index_.find(sector_id);
  if (it == sector_index_.end()) return nullptr;
  const std::int64_t day = core::to_day_number(date) - core::to_day_number(start_date_);
  if (day < 0 || day >= n_days_ || slot < 0 || slot >= core::kSlotsPerDay) return nullptr;
  return &rates_[flat_index(it->second, static_cast<int>(day), slot)];
}

double GroundTruth::at(const std::string& sector_id, const core::Date& date, int slot) const {
  const double* rate = lookup(sector_id, date, slot);
  if (rate == nullptr) {
    throw core::ValidationError("no ground-truth cell for " + sector_id + " " + core::format_date(date) +
                                " slot " + std::to_string(slot));
  }
  return *rate;
}

bool GroundTruth::contains(const std::string& sector_id, const core::Date& date, int slot) const {
  return lookup(sector_id, date, slot) != nullptr;
}

std::vector<core::CellRate> GroundTruth::cells() const {
  std::vector<core::CellRate> out;
  out.reserve(rates_.size());
  for (size_t s = 0; s < sector_ids_.size(); ++s) {
    for (int day = 0; day < n_days_; ++day) {
      const core::Date date = core::add_days(start_date_, day);
      for (int slot = 0; slot < core::kSlotsPerDay; ++slot) {
        out.push_back(core::CellRate{sector_ids_[s], date, slot, rates_[flat_index(s, day, slot)]});
      }
    }
  }
  return out;
}

Corpus generate(const GeneratorConfig& cfg) {
  cfg.validate();
  Corpus corpus;

  //  Sectors: uniform over the bounding box, capacities around the mean.
  core::Rng sector_rng = core::Rng::fork(cfg.seed, kStreamSectors);
  std::vector<core::Sector> sector_rows;
  sector_rows.reserve(static_cast<size_t>(cfg.n_sectors));
  for (int i = 0; i < cfg.n_sectors; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "S%03d", i + 1);
    core::Sector s;
    s.id = id;
    s.center_lat = sector_rng.uniform(cfg.lat_min, cfg.lat_max);
    s.center_lon = sector_rng.uniform(cfg.lon_min, cfg.lon_max);
    s.capacity = std::max(1, static_cast<int>(std::llround(sector_rng.normal(cfg.mean_capacity, 3.0))));
    sector_rows.push_back(std::move(s));
  }
  corpus.sectors = core::SectorSet::from_rows(std::move(sector_rows));

  //  PoIs: clustered around the city center.
  core::Rng poi_rng = core::Rng::fork(cfg.seed, kStreamPois);
  const double lat_c = 0.5 * (cfg.lat_min + cfg.lat_max);
  const double lon_c = 0.5 * (cfg.lon_min + cfg.lon_max);
  for (int i = 0; i < cfg.n_pois; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "poi%02d", i + 1);
    core::Poi p;
    p.name = name;
    p.lat = std::clamp(lat_c + poi_rng.normal(0.0, 0.25 * (cfg.lat_max - cfg.lat_min)), cfg.lat_min,
                       cfg.lat_max);
    p.lon = std::clamp(lon_c + poi_rng.normal(0.0, 0.25 * (cfg.lon_max - cfg.lon_min)), cfg.lon_min,
                       cfg.lon_max);
    corpus.pois.items.push_back(std::move(p));
  }

  //  Hourly weather: seasonal + diurnal sines plus an AR(1) residual.
  core::Rng weather_rng = core::Rng::fork(cfg.seed, kStreamWeather);
  double ar = 0.0;
  for (int day = 0; day < cfg.n_days; ++day) {
    const core::Date date = core::add_days(cfg.start_date, day);
    const int day_of_year = static_cast<int>(core::to_day_number(date) -
                                             core::to_day_number(core::Date{date.year, 1, 1}));
    for (int hour = 0; hour < 24; ++hour) {
      ar = 0.9 * ar + weather_rng.normal(0.0, 1.0);
      const double seasonal = 12.0 + 8.0 * std::sin(2.0 * M_PI * (day_of_year - 105) / 365.0);
      const double diurnal = 5.0 * std::sin(2.0 * M_PI * (hour - 9) / 24.0);
      core::WeatherSample w;
      w.timestamp = core::DateTime{date, hour * 60};
      w.temperature_c = seasonal + diurnal + ar;
      w.humidity_pct = std::clamp(65.0 - 1.2 * (w.temperature_c - 12.0) + weather_rng.normal(0.0, 5.0),
                                  5.0, 100.0);
      corpus.weather.samples.push_back(w);
    }
  }

  //  Calendar: random holidays, one contiguous pandemic wave mid-range.
  core::Rng calendar_rng = core::Rng::fork(cfg.seed, kStreamCalendar);
  const int pandemic_begin = static_cast<int>(0.30 * cfg.n_days);
  const int pandemic_end = static_cast<int>(0.45 * cfg.n_days);
  for (int day = 0; day < cfg.n_days; ++day) {
    core::CalendarInfo rec;
    rec.date = core::add_days(cfg.start_date, day);
    rec.is_holiday = calendar_rng.uniform() < cfg.holiday_probability;
    rec.is_pandemic = day >= pandemic_begin && day < pandemic_end;
    corpus.calendar.push_back(rec);
  }

  //  Per-sector structure: Beta base plus remoteness offset.
  core::Rng rate_rng = core::Rng::fork(cfg.seed, kStreamRates);
  const auto& sectors = corpus.sectors.items();
  std::vector<double> sector_base(sectors.size());
  std::vector<double> nearest_poi_km(sectors.size());
  double max_nearest = 0.0;
  for (size_t s = 0; s < sectors.size(); ++s) {
    sector_base[s] = rate_rng.beta(kBetaA, kBetaB);
    double nearest = std::numeric_limits<double>::infinity();
    for (const core::Poi& p : corpus.pois.items) {
      nearest = std::min(nearest,
                         core::haversine_km(sectors[s].center_lat, sectors[s].center_lon, p.lat, p.lon));
    }
    nearest_poi_km[s] = nearest;
    max_nearest = std::max(max_nearest, nearest);
  }

  // Analytic re-centering of the non-base terms, so E[rate] tracks the
  // calibration target; the Beta mean carries the target itself.
  double mean_remote = 0.0;
  for (size_t s = 0; s < sectors.size(); ++s) {
    mean_remote += kRemoteGain * nearest_poi_km[s] / max_nearest;
  }
  mean_remote /= static_cast<double>(sectors.size());
  double mean_tod = 0.0;
  for (int slot = 0; slot < core::kSlotsPerDay; ++slot) mean_tod += kTodAmplitude * tod_bump(slot);
  mean_tod /= core::kSlotsPerDay;
  const double pandemic_fraction = static_cast<double>(pandemic_end - pandemic_begin) / cfg.n_days;
  const double level_adjust = (cfg.target_global_mean - kBetaA / (kBetaA + kBetaB)) - mean_remote -
                              mean_tod - cfg.holiday_probability * kHolidayBoost -
                              pandemic_fraction * kPandemicDrop;

  //  True rates and scans.
  std::vector<std::string> ids;
  ids.reserve(sectors.size());
  for (const core::Sector& s : sectors) ids.push_back(s.id);
  corpus.truth = GroundTruth(ids, cfg.start_date, cfg.n_days);

  core::Rng scan_rng = core::Rng::fork(cfg.seed, kStreamScans);
  const core::CalendarTable calendar_table(corpus.calendar);
  for (size_t s = 0; s < sectors.size(); ++s) {
    const double remote = kRemoteGain * nearest_poi_km[s] / max_nearest;
    for (int day = 0; day < cfg.n_days; ++day) {
      const core::Date date = core::add_days(cfg.start_date, day);
      const core::CalendarInfo& info = calendar_table.at(date);
      const double weekday_term = kWeekdayAmplitude * std::sin(2.0 * M_PI * core::day_of_week(date) / 7.0);
      for (int slot = 0; slot < core::kSlotsPerDay; ++slot) {
        const size_t hour_index =
            static_cast<size_t>(day) * 24 + static_cast<size_t>(7 + slot);
        const double temp_dev =
            corpus.weather.samples[hour_index].temperature_c -
            (12.0 + 8.0 * std::sin(2.0 * M_PI *
                                   (core::to_day_number(date) -
                                    core::to_day_number(core::Date{date.year, 1, 1}) - 105) /
                                   365.0));
        double rate = sector_base[s] + remote + kTodAmplitude * tod_bump(slot) + weekday_term +
                      kWeatherGain * temp_dev + (info.is_holiday ? kHolidayBoost : 0.0) +
                      (info.is_pandemic ? kPandemicDrop : 0.0) + level_adjust +
                      rate_rng.normal(0.0, kCellNoiseSigma);
        rate = std::clamp(rate, 0.0, 1.0);
        corpus.truth.set(static_cast<int>(s), day, slot, rate);

        if (scan_rng.uniform() < cfg.scan_coverage) {
          const int minute = static_cast<int>(scan_rng.uniform_int(0, 59));
          core::ScanSession scan;
          scan.sector_id = sectors[s].id;
          scan.timestamp =
              core::DateTime{date, core::kEnforcementStartMinute + slot * 60 + minute};
          scan.cars_scanned = sectors[s].capacity;
          scan.violations = scan_rng.binomial(sectors[s].capacity, rate);
          corpus.scans.push_back(std::move(scan));
        }
      }
    }
  }
  std::stable_sort(corpus.scans.begin(), corpus.scans.end(),
                   [](const core::ScanSession& a, const core::ScanSession& b) {
                     return a.timestamp < b.timestamp;
                   });
  return corpus;
}

double oracle_mae(const std::vector<core::CellRate>& predictions, const GroundTruth& truth) {
  double abs_sum = 0.0;
  size_t matched = 0;
  for (const core::CellRate& p : predictions) {
    if (!truth.contains(p.sector_id, p.date, p.slot)) continue;
    abs_sum += std::abs(p.value - truth.at(p.sector_id, p.date, p.slot));
    ++matched;
  }
  if (matched == 0) {
    throw core::ValidationError("oracle_mae: no prediction matches a ground-truth cell");
  }
  return abs_sum / static_cast<double>(matched);
}

}  // namespace parkcast::synth
