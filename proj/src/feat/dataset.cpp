#include "parkcast/feat/dataset.hpp"

#include <cstdio>

#include "parkcast/core/csv.hpp"
#include "parkcast/core/error.hpp"

namespace parkcast::feat {

namespace {

std::vector<std::string> dataset_header() {
  std::vector<std::string> header;
  header.reserve(kFeatureDim + 4);
  for (int c = 0; c < kFeatureDim; ++c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "f%02d", c);
    header.emplace_back(buf);
  }
  header.insert(header.end(), {"sector_id", "date", "slot", "target"});
  return header;
}

}  // namespace

Dataset build_dataset(const std::vector<label::SlotLabel>& labels, const core::SectorSet& sectors,
                      const core::WeatherSeries& weather, const core::CalendarTable& calendar,
                      const core::PoiSet& pois) {
  Dataset d;
  d.rows.reserve(labels.size());
  for (const label::SlotLabel& l : labels) {
    const core::Sector& sector = sectors.at(l.sector_id);
    DataRow row;
    row.features = build_vector(sector, l.slot, weather, calendar, pois);
    row.sector_id = l.sector_id;
    row.date = l.slot.date;
    row.slot = l.slot.index;
    row.target = l.target;
    d.rows.push_back(std::move(row));
  }
  return d;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  core::CsvWriter writer(path, dataset_header());
  std::vector<std::string> fields(kFeatureDim + 4);
  for (const DataRow& row : d.rows) {
    for (int c = 0; c < kFeatureDim; ++c) {
      fields[c] = core::format_double(row.features[c]);
    }
    fields[kFeatureDim] = row.sector_id;
    fields[kFeatureDim + 1] = core::format_date(row.date);
    fields[kFeatureDim + 2] = std::to_string(row.slot);
    fields[kFeatureDim + 3] = core::format_double(row.target);
    writer.row(fields);
  }
  writer.close();
}

Dataset load_dataset(const std::filesystem::path& path) {
  core::CsvReader reader(path, dataset_header());
  Dataset d;
  std::vector<std::string> f;
  while (reader.next(f)) {
    DataRow row;
    const std::string context = path.string() + ":" + std::to_string(reader.line());
    for (int c = 0; c < kFeatureDim; ++c) {
      row.features[c] = core::parse_double_field(f[c], context);
    }
    row.sector_id = f[kFeatureDim];
    try {
      row.date = core::parse_date(f[kFeatureDim + 1]);
    } catch (const core::ParseError& e) {
      reader.fail(e.what());
    }
    row.slot = static_cast<int>(core::parse_long_field(f[kFeatureDim + 2], context));
    if (row.slot < 0 || row.slot >= core::kSlotsPerDay) reader.fail("slot out of range [0, 11]");
    row.target = core::parse_double_field(f[kFeatureDim + 3], context);
    d.rows.push_back(std::move(row));
  }
  return d;
}

}  // namespace parkcast::feat
