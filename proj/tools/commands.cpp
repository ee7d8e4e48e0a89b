#include "commands.hpp"

#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "config_file.hpp"
#include "manifest.hpp"
#include "parkcast/core/csv.hpp"
#include "parkcast/core/error.hpp"
#include "parkcast/core/io.hpp"
#include "parkcast/feat/dataset.hpp"
#include "parkcast/label/labeling.hpp"
#include "parkcast/nn/model.hpp"
#include "parkcast/synth/synthgen.hpp"
#include "parkcast/train/trainer.hpp"

namespace parkcast::cli {

namespace fs = std::filesystem;

namespace {

/// Removes declared outputs when a command throws midway.
class OutputGuard {
 public:
  explicit OutputGuard(fs::path out_dir) : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  fs::path declare(const std::string& name) {
    outputs_.push_back(out_dir_ / name);
    return outputs_.back();
  }

  std::vector<std::string> output_names() const {
    std::vector<std::string> names;
    for (const fs::path& p : outputs_) names.push_back(p.filename().string());
    return names;
  }

  void release() { released_ = true; }

  ~OutputGuard() {
    if (released_) return;
    std::error_code ec;
    for (const fs::path& p : outputs_) fs::remove(p, ec);
    fs::remove(out_dir_ / "manifest.json", ec);
  }

 private:
  fs::path out_dir_;
  std::vector<fs::path> outputs_;
  bool released_{false};
};

void require_file(const fs::path& path, const std::string& role) {
  if (!fs::exists(path)) {
    throw core::Error("missing " + role + " file: " + path.string());
  }
}

KeyValueConfig load_config_if_any(const std::optional<fs::path>& path) {
  return path.has_value() ? KeyValueConfig::load(*path) : KeyValueConfig{};
}

std::string fmt(double v) { return core::format_double(v); }

const std::set<std::string> kTrainKeys = {"lr0",  "decay", "epochs",    "batch_size",    "beta1",
                                          "beta2", "eps",   "seed",      "target_lo",     "target_hi",
                                          "max_train_rows"};

train::TrainConfig resolve_train_config(const KeyValueConfig& file_cfg, const TrainOverrides& flags,
                                        const std::optional<std::uint64_t>& seed_flag) {
  train::TrainConfig cfg;
  if (file_cfg.has("lr0")) cfg.lr0 = file_cfg.get_double("lr0");
  if (file_cfg.has("decay")) cfg.decay = file_cfg.get_double("decay");
  if (file_cfg.has("epochs")) cfg.epochs = static_cast<int>(file_cfg.get_long("epochs"));
  if (file_cfg.has("batch_size")) cfg.batch_size = static_cast<int>(file_cfg.get_long("batch_size"));
  if (file_cfg.has("beta1")) cfg.beta1 = file_cfg.get_double("beta1");
  if (file_cfg.has("beta2")) cfg.beta2 = file_cfg.get_double("beta2");
  if (file_cfg.has("eps")) cfg.eps = file_cfg.get_double("eps");
  if (file_cfg.has("seed")) cfg.seed = file_cfg.get_u64("seed");
  if (file_cfg.has("target_lo")) cfg.target_lo = file_cfg.get_double("target_lo");
  if (file_cfg.has("target_hi")) cfg.target_hi = file_cfg.get_double("target_hi");
  if (file_cfg.has("max_train_rows")) cfg.max_train_rows = static_cast<int>(file_cfg.get_long("max_train_rows"));
  if (flags.lr0) cfg.lr0 = *flags.lr0;
  if (flags.decay) cfg.decay = *flags.decay;
  if (flags.epochs) cfg.epochs = *flags.epochs;
  if (flags.batch_size) cfg.batch_size = *flags.batch_size;
  if (flags.max_train_rows) cfg.max_train_rows = *flags.max_train_rows;
  if (seed_flag) cfg.seed = *seed_flag;
  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> train_config_snapshot(const train::TrainConfig& cfg) {
  return {{"lr0", fmt(cfg.lr0)},
          {"decay", fmt(cfg.decay)},
          {"epochs", std::to_string(cfg.epochs)},
          {"batch_size", std::to_string(cfg.batch_size)},
          {"beta1", fmt(cfg.beta1)},
          {"beta2", fmt(cfg.beta2)},
          {"eps", fmt(cfg.eps)},
          {"seed", std::to_string(cfg.seed)},
          {"target_lo", fmt(cfg.target_lo)},
          {"target_hi", fmt(cfg.target_hi)},
          {"max_train_rows", std::to_string(cfg.max_train_rows)}};
}

void write_json(const nlohmann::json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw core::Error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

nlohmann::json report_to_json(const train::EvalReport& report) {
  nlohmann::json j;
  j["mae"] = report.mae;
  j["mae_baseline"] = report.mae_baseline;
  j["best_epoch"] = report.best_epoch;
  j["train_target_mean"] = report.train_target_mean;
  nlohmann::json curve = nlohmann::json::array();
  for (const train::EpochPoint& p : report.curve) {
    curve.push_back({{"epoch", p.epoch}, {"val_mae", p.val_mae}});
  }
  j["curve"] = std::move(curve);
  j["train_mse"] = report.train_mse;
  if (report.fold >= 0) j["fold"] = report.fold;
  return j;
}

struct LoadedDataDir {
  core::SectorSet sectors;
  core::PoiSet pois;
  core::WeatherSeries weather;
  std::vector<core::CalendarInfo> calendar;
};

LoadedDataDir load_data_dir(const fs::path& dir, RunManifest& manifest) {
  for (const char* name : {"sectors.csv", "pois.csv", "weather.csv", "calendar.csv"}) {
    require_file(dir / name, name);
    manifest.input_digests[(dir / name).string()] = file_digest_hex(dir / name);
  }
  LoadedDataDir d;
  d.sectors = core::load_sectors(dir / "sectors.csv");
  d.pois = core::load_pois(dir / "pois.csv");
  d.weather = core::load_weather(dir / "weather.csv");
  d.calendar = core::load_calendar(dir / "calendar.csv");
  return d;
}

std::vector<label::SessionRate> scans_to_session_rates(const std::vector<core::ScanSession>& scans,
                                                       const core::SectorSet& sectors) {
  const std::vector<core::ScanSession> sessions = label::group_scans(scans);
  std::vector<label::SessionRate> rates;
  rates.reserve(sessions.size());
  for (const core::ScanSession& s : sessions) {
    rates.push_back(label::session_rate(s, sectors.at(s.sector_id)));
  }
  return rates;
}

using CellKey = std::tuple<std::string, std::int64_t, int>;

CellKey cell_key(const feat::DataRow& row) {
  return CellKey{row.sector_id, core::to_day_number(row.date), row.slot};
}

}  // namespace

void cmd_synth(const SynthArgs& args) {
  const KeyValueConfig file_cfg = load_config_if_any(args.config_path);
  file_cfg.restrict_keys({"n_sectors", "mean_capacity", "n_pois", "n_days", "scan_coverage", "seed",
                          "start_date", "lat_min", "lat_max", "lon_min", "lon_max", "target_global_mean",
                          "holiday_probability"});

  synth::GeneratorConfig cfg;
  if (file_cfg.has("n_sectors")) cfg.n_sectors = static_cast<int>(file_cfg.get_long("n_sectors"));
  if (file_cfg.has("mean_capacity")) cfg.mean_capacity = file_cfg.get_double("mean_capacity");
  if (file_cfg.has("n_pois")) cfg.n_pois = static_cast<int>(file_cfg.get_long("n_pois"));
  if (file_cfg.has("n_days")) cfg.n_days = static_cast<int>(file_cfg.get_long("n_days"));
  if (file_cfg.has("scan_coverage")) cfg.scan_coverage = file_cfg.get_double("scan_coverage");
  if (file_cfg.has("seed")) cfg.seed = file_cfg.get_u64("seed");
  if (file_cfg.has("start_date")) cfg.start_date = core::parse_date(file_cfg.get_string("start_date"));
  if (file_cfg.has("lat_min")) cfg.lat_min = file_cfg.get_double("lat_min");
  if (file_cfg.has("lat_max")) cfg.lat_max = file_cfg.get_double("lat_max");
  if (file_cfg.has("lon_min")) cfg.lon_min = file_cfg.get_double("lon_min");
  if (file_cfg.has("lon_max")) cfg.lon_max = file_cfg.get_double("lon_max");
  if (file_cfg.has("target_global_mean")) cfg.target_global_mean = file_cfg.get_double("target_global_mean");
  if (file_cfg.has("holiday_probability")) cfg.holiday_probability = file_cfg.get_double("holiday_probability");
  if (args.n_sectors) cfg.n_sectors = *args.n_sectors;
  if (args.n_pois) cfg.n_pois = *args.n_pois;
  if (args.n_days) cfg.n_days = *args.n_days;
  if (args.mean_capacity) cfg.mean_capacity = *args.mean_capacity;
  if (args.scan_coverage) cfg.scan_coverage = *args.scan_coverage;
  if (args.start_date) cfg.start_date = core::parse_date(*args.start_date);
  if (args.seed) cfg.seed = *args.seed;

  OutputGuard guard(args.out_dir);
  const fs::path sectors_path = guard.declare("sectors.csv");
  const fs::path pois_path = guard.declare("pois.csv");
  const fs::path scans_path = guard.declare("scans.csv");
  const fs::path weather_path = guard.declare("weather.csv");
  const fs::path calendar_path = guard.declare("calendar.csv");
  const fs::path truth_path = guard.declare("truth.csv");

  const synth::Corpus corpus = synth::generate(cfg);
  core::save_sectors(corpus.sectors, sectors_path);
  core::save_pois(corpus.pois, pois_path);
  core::save_scans(corpus.scans, scans_path);
  core::save_weather(corpus.weather, weather_path);
  core::save_calendar(corpus.calendar, calendar_path);
  core::save_cell_rates(corpus.truth.cells(), truth_path, "true_rate");

  RunManifest manifest;
  manifest.subcommand = "synth";
  manifest.seed = cfg.seed;
  manifest.tool_version = kToolVersion;
  manifest.config = {{"n_sectors", std::to_string(cfg.n_sectors)},
                     {"mean_capacity", fmt(cfg.mean_capacity)},
                     {"n_pois", std::to_string(cfg.n_pois)},
                     {"n_days", std::to_string(cfg.n_days)},
                     {"scan_coverage", fmt(cfg.scan_coverage)},
                     {"seed", std::to_string(cfg.seed)},
                     {"start_date", core::format_date(cfg.start_date)},
                     {"lat_min", fmt(cfg.lat_min)},
                     {"lat_max", fmt(cfg.lat_max)},
                     {"lon_min", fmt(cfg.lon_min)},
                     {"lon_max", fmt(cfg.lon_max)},
                     {"target_global_mean", fmt(cfg.target_global_mean)},
                     {"holiday_probability", fmt(cfg.holiday_probability)}};
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_label(const LabelArgs& args) {
  require_file(args.scans_path, "scans");
  require_file(args.sectors_path, "sectors");
  const KeyValueConfig file_cfg = load_config_if_any(args.config_path);
  file_cfg.restrict_keys({"mode", "sigma_minutes", "neighbor_slots"});

  std::string mode = "smoothed";
  label::SmoothingConfig smoothing;
  if (file_cfg.has("mode")) mode = file_cfg.get_string("mode");
  if (file_cfg.has("sigma_minutes")) smoothing.sigma_minutes = file_cfg.get_double("sigma_minutes");
  if (file_cfg.has("neighbor_slots")) smoothing.neighbor_slots = static_cast<int>(file_cfg.get_long("neighbor_slots"));
  if (args.mode) mode = *args.mode;
  if (args.sigma_minutes) smoothing.sigma_minutes = *args.sigma_minutes;
  if (args.neighbor_slots) smoothing.neighbor_slots = *args.neighbor_slots;
  if (mode != "raw" && mode != "smoothed") {
    throw core::Error("label mode must be 'raw' or 'smoothed', got '" + mode + "'");
  }

  const core::SectorSet sectors = core::load_sectors(args.sectors_path);
  const std::vector<core::ScanSession> scans = core::load_scans(args.scans_path);
  const std::vector<label::SessionRate> rates = scans_to_session_rates(scans, sectors);
  const label::LabelBuild build =
      mode == "raw" ? label::assign_raw(rates) : label::smooth(rates, smoothing);
  const label::SpatialStats stats = label::spatial_stats(build.labels, sectors);

  OutputGuard guard(args.out_dir);
  const fs::path labels_path = guard.declare("labels.csv");
  const fs::path stats_csv_path = guard.declare("sector_stats.csv");
  const fs::path stats_geojson_path = guard.declare("sector_stats.geojson");
  label::save_labels(build.labels, labels_path);
  label::save_spatial_stats_csv(stats, sectors, stats_csv_path);
  label::save_spatial_stats_geojson(stats, sectors, stats_geojson_path);

  RunManifest manifest;
  manifest.subcommand = "label";
  manifest.tool_version = kToolVersion;
  manifest.input_digests = {{args.scans_path.string(), file_digest_hex(args.scans_path)},
                            {args.sectors_path.string(), file_digest_hex(args.sectors_path)}};
  manifest.config = {{"mode", mode},
                     {"sigma_minutes", fmt(smoothing.sigma_minutes)},
                     {"neighbor_slots", std::to_string(smoothing.neighbor_slots)},
                     {"sessions", std::to_string(rates.size())},
                     {"dropped_out_of_hours", std::to_string(build.dropped_out_of_hours)},
                     {"global_mean_rate", fmt(stats.global_mean)}};
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_build(const BuildArgs& args) {
  require_file(args.labels_path, "labels");

  RunManifest manifest;
  manifest.subcommand = "build";
  manifest.tool_version = kToolVersion;
  const LoadedDataDir data = load_data_dir(args.data_dir, manifest);
  manifest.input_digests[args.labels_path.string()] = file_digest_hex(args.labels_path);

  const std::vector<label::SlotLabel> labels = label::load_labels(args.labels_path);
  const core::CalendarTable calendar_table(data.calendar);
  const feat::Dataset dataset = feat::build_dataset(labels, data.sectors, data.weather, calendar_table, data.pois);
  if (dataset.size() < 2) {
    throw core::Error("dataset has fewer than 2 rows; cannot fit reference statistics");
  }
  std::vector<feat::FeatureVector> features;
  features.reserve(dataset.size());
  for (const feat::DataRow& row : dataset.rows) features.push_back(row.features);
  const feat::Standardizer standardizer = feat::Standardizer::fit(features);

  OutputGuard guard(args.out_dir);
  const fs::path dataset_path = guard.declare("dataset.csv");
  const fs::path standardizer_path = guard.declare("standardizer.json");
  feat::save_dataset(dataset, dataset_path);
  feat::save_standardizer(standardizer, standardizer_path);

  manifest.config = {{"rows", std::to_string(dataset.size())}};
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_train(const TrainArgs& args) {
  require_file(args.dataset_path, "dataset");
  const KeyValueConfig file_cfg = load_config_if_any(args.config_path);
  file_cfg.restrict_keys(kTrainKeys);
  const train::TrainConfig cfg = resolve_train_config(file_cfg, args, args.seed);

  const feat::Dataset dataset = feat::load_dataset(args.dataset_path);
  auto [train_ds, val_ds] = train::split_80_20(dataset, cfg.seed);
  const train::TrainResult result = train::train(train_ds, val_ds, cfg);

  OutputGuard guard(args.out_dir);
  const fs::path model_path = guard.declare("model.json");
  const fs::path report_path = guard.declare("report.json");
  nn::save_model(result.model, model_path);
  nlohmann::json report = report_to_json(result.report);
  report["n_train_rows"] = train_ds.size();
  report["n_val_rows"] = val_ds.size();
  write_json(report, report_path);

  RunManifest manifest;
  manifest.subcommand = "train";
  manifest.seed = cfg.seed;
  manifest.tool_version = kToolVersion;
  manifest.input_digests = {{args.dataset_path.string(), file_digest_hex(args.dataset_path)}};
  manifest.config = train_config_snapshot(cfg);
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_eval(const EvalArgs& args) {
  require_file(args.model_path, "model");
  require_file(args.dataset_path, "dataset");

  const nn::MlpModel model = nn::load_model(args.model_path);
  const feat::Dataset dataset = feat::load_dataset(args.dataset_path);
  const double mae = train::evaluate_mae(model, dataset);
  const double baseline = train::baseline_mae(model.train_target_mean, dataset);

  OutputGuard guard(args.out_dir);
  const fs::path report_path = guard.declare("report.json");
  nlohmann::json report;
  report["mae"] = mae;
  report["mae_baseline"] = baseline;
  report["train_target_mean"] = model.train_target_mean;
  report["n_rows"] = dataset.size();
  write_json(report, report_path);

  RunManifest manifest;
  manifest.subcommand = "eval";
  manifest.tool_version = kToolVersion;
  manifest.input_digests = {{args.model_path.string(), file_digest_hex(args.model_path)},
                            {args.dataset_path.string(), file_digest_hex(args.dataset_path)}};
  manifest.config = {{"mae", fmt(mae)}, {"mae_baseline", fmt(baseline)}};
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_cv(const CvArgs& args) {
  require_file(args.dataset_path, "dataset");
  KeyValueConfig file_cfg = load_config_if_any(args.config_path);
  std::set<std::string> keys = kTrainKeys;
  keys.insert("k");
  file_cfg.restrict_keys(keys);
  const train::TrainConfig cfg = resolve_train_config(file_cfg, args, args.seed);
  int k = 4;
  if (file_cfg.has("k")) k = static_cast<int>(file_cfg.get_long("k"));
  if (args.k) k = *args.k;

  const feat::Dataset dataset = feat::load_dataset(args.dataset_path);
  const std::vector<train::EvalReport> reports = train::cross_validate(dataset, cfg, k);

  OutputGuard guard(args.out_dir);
  const fs::path curves_path = guard.declare("cv_curves.csv");
  train::save_cv_curves(reports, curves_path);

  // Recommended early-stop epoch: argmin of the mean validation curve.
  std::vector<double> mean_curve(static_cast<size_t>(cfg.epochs), 0.0);
  for (const train::EvalReport& r : reports) {
    for (const train::EpochPoint& p : r.curve) mean_curve[static_cast<size_t>(p.epoch)] += p.val_mae;
  }
  int best_epoch = 0;
  for (size_t e = 1; e < mean_curve.size(); ++e) {
    if (mean_curve[e] < mean_curve[static_cast<size_t>(best_epoch)]) best_epoch = static_cast<int>(e);
  }

  RunManifest manifest;
  manifest.subcommand = "cv";
  manifest.seed = cfg.seed;
  manifest.tool_version = kToolVersion;
  manifest.input_digests = {{args.dataset_path.string(), file_digest_hex(args.dataset_path)}};
  manifest.config = train_config_snapshot(cfg);
  manifest.config["k"] = std::to_string(k);
  manifest.config["recommended_epoch"] = std::to_string(best_epoch);
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_ablation(const AblationArgs& args) {
  const fs::path scans_path = args.data_dir / "scans.csv";
  require_file(scans_path, "scans");
  KeyValueConfig file_cfg = load_config_if_any(args.config_path);
  std::set<std::string> keys = kTrainKeys;
  keys.insert("sigma_minutes");
  keys.insert("neighbor_slots");
  file_cfg.restrict_keys(keys);
  const train::TrainConfig cfg = resolve_train_config(file_cfg, args, args.seed);
  label::SmoothingConfig smoothing;
  if (file_cfg.has("sigma_minutes")) smoothing.sigma_minutes = file_cfg.get_double("sigma_minutes");
  if (file_cfg.has("neighbor_slots")) smoothing.neighbor_slots = static_cast<int>(file_cfg.get_long("neighbor_slots"));
  if (args.sigma_minutes) smoothing.sigma_minutes = *args.sigma_minutes;
  if (args.neighbor_slots) smoothing.neighbor_slots = *args.neighbor_slots;

  RunManifest manifest;
  manifest.subcommand = "ablation";
  manifest.seed = cfg.seed;
  manifest.tool_version = kToolVersion;
  const LoadedDataDir data = load_data_dir(args.data_dir, manifest);
  manifest.input_digests[scans_path.string()] = file_digest_hex(scans_path);

  const std::vector<core::ScanSession> scans = core::load_scans(scans_path);
  const std::vector<label::SessionRate> rates = scans_to_session_rates(scans, data.sectors);
  const core::CalendarTable calendar_table(data.calendar);

  const feat::Dataset raw_ds = feat::build_dataset(label::assign_raw(rates).labels, data.sectors,
                                                   data.weather, calendar_table, data.pois);
  const feat::Dataset smoothed_ds = feat::build_dataset(label::smooth(rates, smoothing).labels, data.sectors,
                                                        data.weather, calendar_table, data.pois);

  // Test cells come from the raw dataset's split; the smoothed train/test
  // sets reuse those cells so all four table entries share one test split.
  auto [raw_train, raw_test] = train::split_80_20(raw_ds, cfg.seed);
  std::set<CellKey> test_cells;
  for (const feat::DataRow& row : raw_test.rows) test_cells.insert(cell_key(row));
  feat::Dataset smoothed_train;
  feat::Dataset smoothed_test;
  for (const feat::DataRow& row : smoothed_ds.rows) {
    (test_cells.count(cell_key(row)) != 0 ? smoothed_test : smoothed_train).rows.push_back(row);
  }

  const train::TrainResult raw_run = train::train(raw_train, raw_test, cfg);
  const train::TrainResult smoothed_run = train::train(smoothed_train, raw_test, cfg);

  const double raw_raw = train::evaluate_mae(raw_run.model, raw_test);
  const double raw_smoothed = train::evaluate_mae(raw_run.model, smoothed_test);
  const double smoothed_raw = train::evaluate_mae(smoothed_run.model, raw_test);
  const double smoothed_smoothed = train::evaluate_mae(smoothed_run.model, smoothed_test);
  const double baseline = train::baseline_mae(raw_run.model.train_target_mean, raw_test);

  OutputGuard guard(args.out_dir);
  const fs::path table_path = guard.declare("table.csv");
  const fs::path report_path = guard.declare("report.json");
  {
    core::CsvWriter writer(table_path, {"method", "raw_test_mae", "smoothed_test_mae"});
    writer.row({"without_smoothing", fmt(raw_raw), fmt(raw_smoothed)});
    writer.row({"with_smoothing", fmt(smoothed_raw), fmt(smoothed_smoothed)});
    writer.close();
  }
  nlohmann::json report;
  report["baseline_raw_test_mae"] = baseline;
  report["without_smoothing"] = {{"raw_test_mae", raw_raw}, {"smoothed_test_mae", raw_smoothed}};
  report["with_smoothing"] = {{"raw_test_mae", smoothed_raw}, {"smoothed_test_mae", smoothed_smoothed}};
  report["n_rows"] = {{"raw_train", raw_train.size()},
                      {"raw_test", raw_test.size()},
                      {"smoothed_train", smoothed_train.size()},
                      {"smoothed_test", smoothed_test.size()}};
  write_json(report, report_path);

  manifest.config = train_config_snapshot(cfg);
  manifest.config["sigma_minutes"] = fmt(smoothing.sigma_minutes);
  manifest.config["neighbor_slots"] = std::to_string(smoothing.neighbor_slots);
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

void cmd_predict(const PredictArgs& args) {
  require_file(args.model_path, "model");
  require_file(args.dataset_path, "dataset");

  const nn::MlpModel model = nn::load_model(args.model_path);
  const feat::Dataset dataset = feat::load_dataset(args.dataset_path);
  const std::vector<double> preds = train::predict(model, dataset);

  std::vector<core::CellRate> cells;
  cells.reserve(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) {
    const feat::DataRow& row = dataset.rows[i];
    cells.push_back(core::CellRate{row.sector_id, row.date, row.slot, preds[i]});
  }

  OutputGuard guard(args.out_dir);
  const fs::path pred_path = guard.declare("predictions.csv");
  core::save_cell_rates(cells, pred_path, "predicted_rate");

  RunManifest manifest;
  manifest.subcommand = "predict";
  manifest.tool_version = kToolVersion;
  manifest.input_digests = {{args.model_path.string(), file_digest_hex(args.model_path)},
                            {args.dataset_path.string(), file_digest_hex(args.dataset_path)}};
  manifest.config = {{"n_rows", std::to_string(dataset.size())}};
  manifest.outputs = guard.output_names();
  write_manifest(manifest, args.out_dir);
  guard.release();
}

}  // namespace parkcast::cli
