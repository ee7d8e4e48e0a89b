#include <doctest.h>

#include <cmath>
#include <map>

#include "parkcast/core/error.hpp"
#include "parkcast/core/geo.hpp"
#include "parkcast/label/labeling.hpp"
#include "parkcast/synth/synthgen.hpp"

using namespace parkcast;

namespace {

synth::GeneratorConfig small_config(std::uint64_t seed) {
  synth::GeneratorConfig cfg;
  cfg.n_sectors = 40;
  cfg.n_days = 30;
  cfg.scan_coverage = 0.3;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("generation is bit-identical for a fixed seed") {
  const synth::Corpus a = synth::generate(small_config(11));
  const synth::Corpus b = synth::generate(small_config(11));

  REQUIRE(a.scans.size() == b.scans.size());
  for (size_t i = 0; i < a.scans.size(); ++i) {
    CHECK(a.scans[i].sector_id == b.scans[i].sector_id);
    CHECK(a.scans[i].timestamp == b.scans[i].timestamp);
    CHECK(a.scans[i].violations == b.scans[i].violations);
  }
  const auto cells_a = a.truth.cells();
  const auto cells_b = b.truth.cells();
  REQUIRE(cells_a.size() == cells_b.size());
  for (size_t i = 0; i < cells_a.size(); ++i) {
    CHECK(cells_a[i].value == cells_b[i].value);
  }
  for (size_t i = 0; i < a.weather.samples.size(); ++i) {
    CHECK(a.weather.samples[i].temperature_c == b.weather.samples[i].temperature_c);
  }

  const synth::Corpus c = synth::generate(small_config(12));
  CHECK(c.truth.cells()[0].value != cells_a[0].value);
}

TEST_CASE("full coverage scans every cell exactly once") {
  synth::GeneratorConfig cfg = small_config(13);
  cfg.n_sectors = 10;
  cfg.n_days = 5;
  cfg.scan_coverage = 1.0;
  const synth::Corpus corpus = synth::generate(cfg);
  CHECK(corpus.scans.size() == 10u * 5u * core::kSlotsPerDay);

  std::map<std::tuple<std::string, std::int64_t, int>, int> seen;
  for (const core::ScanSession& s : corpus.scans) {
    const int slot = core::slot_index_of_minute(s.timestamp.minute_of_day);
    REQUIRE(slot >= 0);
    seen[{s.sector_id, core::to_day_number(s.timestamp.date), slot}] += 1;
  }
  CHECK(seen.size() == corpus.scans.size());  // exactly one session per cell
}

TEST_CASE("zero coverage produces no scans but full truth") {
  synth::GeneratorConfig cfg = small_config(14);
  cfg.scan_coverage = 0.0;
  const synth::Corpus corpus = synth::generate(cfg);
  CHECK(corpus.scans.empty());
  CHECK(corpus.truth.cell_count() == 40u * 30u * core::kSlotsPerDay);
}

TEST_CASE("observed rates are unbiased for the true rates") {
  const synth::Corpus corpus = synth::generate(small_config(15));
  double bias_sum = 0.0;
  double var_sum = 0.0;
  size_t n = 0;
  for (const core::ScanSession& s : corpus.scans) {
    const int slot = core::slot_index_of_minute(s.timestamp.minute_of_day);
    const double truth = corpus.truth.at(s.sector_id, s.timestamp.date, slot);
    const core::Sector& sector = corpus.sectors.at(s.sector_id);
    const double observed = static_cast<double>(s.violations) / sector.capacity;
    bias_sum += observed - truth;
    var_sum += truth * (1.0 - truth) / sector.capacity;
    ++n;
  }
  const double mean_bias = bias_sum / static_cast<double>(n);
  const double se = std::sqrt(var_sum) / static_cast<double>(n);
  CHECK(std::abs(mean_bias) <= 3.0 * se);
}

TEST_CASE("remote sectors violate more") {
  const synth::Corpus corpus = synth::generate(small_config(16));

  // Sector-mean true rate vs distance to the nearest PoI: positive correlation.
  std::vector<double> remoteness;
  std::vector<double> mean_rate;
  for (const core::Sector& s : corpus.sectors.items()) {
    double nearest = 1e18;
    for (const core::Poi& p : corpus.pois.items) {
      nearest = std::min(nearest, core::haversine_km(s.center_lat, s.center_lon, p.lat, p.lon));
    }
    remoteness.push_back(nearest);
    double sum = 0.0;
    int count = 0;
    for (const core::CellRate& c : corpus.truth.cells()) {
      if (c.sector_id == s.id) {
        sum += c.value;
        ++count;
      }
    }
    mean_rate.push_back(sum / count);
  }
  const auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double mr = mean_of(remoteness);
  const double mm = mean_of(mean_rate);
  double cov = 0.0, var_r = 0.0, var_m = 0.0;
  for (size_t i = 0; i < remoteness.size(); ++i) {
    cov += (remoteness[i] - mr) * (mean_rate[i] - mm);
    var_r += (remoteness[i] - mr) * (remoteness[i] - mr);
    var_m += (mean_rate[i] - mm) * (mean_rate[i] - mm);
  }
  const double correlation = cov / std::sqrt(var_r * var_m);
  CHECK(correlation > 0.2);
}

TEST_CASE("oracle_mae examples") {
  const synth::Corpus corpus = synth::generate(small_config(17));

  // Predictions equal to the truth score zero.
  const auto cells = corpus.truth.cells();
  std::vector<core::CellRate> exact(cells.begin(), cells.begin() + 500);
  CHECK(synth::oracle_mae(exact, corpus.truth) == 0.0);

  // Hand-computed four-cell example.
  synth::GroundTruth tiny({"A"}, core::Date{2022, 1, 1}, 1);
  tiny.set(0, 0, 0, 0.1);
  tiny.set(0, 0, 1, 0.3);
  tiny.set(0, 0, 2, 0.5);
  tiny.set(0, 0, 3, 0.9);
  std::vector<core::CellRate> constant = {{"A", {2022, 1, 1}, 0, 0.5},
                                          {"A", {2022, 1, 1}, 1, 0.5},
                                          {"A", {2022, 1, 1}, 2, 0.5},
                                          {"A", {2022, 1, 1}, 3, 0.5}};
  CHECK(synth::oracle_mae(constant, tiny) == doctest::Approx((0.4 + 0.2 + 0.0 + 0.4) / 4.0).epsilon(1e-15));

  // Permutation invariance.
  std::vector<core::CellRate> reversed(constant.rbegin(), constant.rend());
  CHECK(synth::oracle_mae(reversed, tiny) == synth::oracle_mae(constant, tiny));

  // Disjoint predictions are an error.
  std::vector<core::CellRate> foreign = {{"B", {2022, 1, 1}, 0, 0.5}};
  CHECK_THROWS_AS(synth::oracle_mae(foreign, tiny), core::ValidationError);
}

TEST_CASE("truth table round-trips through cells()") {
  const synth::Corpus corpus = synth::generate(small_config(18));
  const synth::GroundTruth rebuilt = synth::GroundTruth::from_cells(corpus.truth.cells());
  CHECK(rebuilt.cell_count() == corpus.truth.cell_count());
  const auto sample = corpus.truth.cells();
  for (size_t i = 0; i < sample.size(); i += 997) {
    CHECK(rebuilt.at(sample[i].sector_id, sample[i].date, sample[i].slot) == sample[i].value);
  }
}

TEST_CASE("generator validates its configuration") {
  synth::GeneratorConfig cfg;
  cfg.scan_coverage = 1.5;
  CHECK_THROWS_AS(synth::generate(cfg), core::ValidationError);
  cfg = synth::GeneratorConfig{};
  cfg.n_days = 0;
  CHECK_THROWS_AS(synth::generate(cfg), core::ValidationError);
}
