#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "parkcast/feat/features.hpp"
#include "parkcast/label/labeling.hpp"

namespace parkcast::feat {

/// One training/evaluation example: raw features plus its cell identity.
struct DataRow {
  FeatureVector features{};
  std::string sector_id;
  core::Date date;
  int slot{};
  double target{};
};

struct Dataset {
  std::vector<DataRow> rows;

  size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

/// Featurizes every label into a dataset row. Rows keep label order.
/// A label whose date has no calendar record is an error, never a default.
Dataset build_dataset(const std::vector<label::SlotLabel>& labels, const core::SectorSet& sectors,
                      const core::WeatherSeries& weather, const core::CalendarTable& calendar,
                      const core::PoiSet& pois);

/// `dataset.csv`: f00..f27,sector_id,date,slot,target (raw features).
void save_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace parkcast::feat
