#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace parkcast::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct CommonArgs {
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
};

/// Flag-level overrides for the training configuration.
struct TrainOverrides {
  std::optional<double> lr0;
  std::optional<double> decay;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<int> max_train_rows;
};

struct SynthArgs : CommonArgs {
  std::optional<int> n_sectors;
  std::optional<int> n_pois;
  std::optional<int> n_days;
  std::optional<double> mean_capacity;
  std::optional<double> scan_coverage;
  std::optional<std::string> start_date;
};

struct LabelArgs : CommonArgs {
  std::filesystem::path scans_path;
  std::filesystem::path sectors_path;
  std::optional<std::string> mode;  // raw | smoothed
  std::optional<double> sigma_minutes;
  std::optional<int> neighbor_slots;
};

struct BuildArgs : CommonArgs {
  std::filesystem::path data_dir;
  std::filesystem::path labels_path;
};

struct TrainArgs : CommonArgs, TrainOverrides {
  std::filesystem::path dataset_path;
};

struct EvalArgs : CommonArgs {
  std::filesystem::path model_path;
  std::filesystem::path dataset_path;
};

struct CvArgs : TrainArgs {
  std::optional<int> k;
};

struct AblationArgs : CommonArgs, TrainOverrides {
  std::filesystem::path data_dir;
  std::optional<double> sigma_minutes;
  std::optional<int> neighbor_slots;
};

struct PredictArgs : CommonArgs {
  std::filesystem::path model_path;
  std::filesystem::path dataset_path;
};

// Each command writes its declared outputs plus manifest.json into out_dir,
// removing partial outputs when it fails.
void cmd_synth(const SynthArgs& args);
void cmd_label(const LabelArgs& args);
void cmd_build(const BuildArgs& args);
void cmd_train(const TrainArgs& args);
void cmd_eval(const EvalArgs& args);
void cmd_cv(const CvArgs& args);
void cmd_ablation(const AblationArgs& args);
void cmd_predict(const PredictArgs& args);

}  // namespace parkcast::cli
