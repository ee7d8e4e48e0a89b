#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "parkcast/feat/dataset.hpp"
#include "parkcast/nn/model.hpp"

namespace parkcast::train {

struct TrainConfig {
  double lr0{0.001};
  double decay{0.25};  // total learning-rate decay factor across the run
  int epochs{100};
  int batch_size{256};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};
  std::uint64_t seed{0};
  double target_lo{0.1};
  double target_hi{0.9};
  int max_train_rows{0};  // 0 = all; otherwise deterministic subsample

  void validate() const;  // throws ValidationError
};

/// Maps a rate target in [0, 1] away from the sigmoid extremes.
double renorm_target(double y, const TrainConfig& cfg = TrainConfig{});

/// Inverse map for network outputs; clamps back into [0, 1].
double denorm_pred(double yhat, const TrainConfig& cfg = TrainConfig{});

/// lr0 * decay^(epoch / (epochs - 1)): exponential from lr0 down to
/// lr0 * decay over the run. Fewer than 2 epochs -> constant lr0.
double lr_schedule(int epoch, const TrainConfig& cfg);

/// Adamax accumulators, shape-congruent with the model.
struct AdamaxState {
  std::vector<Eigen::MatrixXd> m_weights, u_weights;
  std::vector<Eigen::VectorXd> m_biases, u_biases;
  long step{0};

  static AdamaxState zeros_like(const nn::MlpModel& model);
};

/// One Adamax update:
///   t += 1; m = b1 m + (1-b1) g; u = max(b2 u, |g|);
///   theta -= lr_t / (1 - b1^t) * m / (u + eps).
/// Throws on non-finite gradients.
void adamax_step(nn::MlpModel& model, const nn::Gradients& grads, AdamaxState& state, double lr_t,
                 const TrainConfig& cfg);

struct EpochPoint {
  int epoch{};
  double val_mae{};
};

struct EvalReport {
  double mae{};           // final validation MAE (denormalized preds vs raw targets)
  double mae_baseline{};  // train-mean constant predictor on the same rows
  std::vector<EpochPoint> curve;
  std::vector<double> train_mse;  // mean batch MSE per epoch
  int best_epoch{};       // argmin of the curve
  double train_target_mean{};
  int fold{-1};
  size_t n_train{};
  size_t n_val{};
};

struct TrainResult {
  nn::MlpModel model;
  EvalReport report;
};

/// Trains from scratch on `train_set` (raw features; the standardizer is fit
/// here, on these rows only, and embedded in the model). Minimizes MSE
/// between the sigmoid output and renormalized targets over shuffled
/// mini-batches; records validation MAE per epoch on `val_set`.
TrainResult train(const feat::Dataset& train_set, const feat::Dataset& val_set, const TrainConfig& cfg);

/// MAE of denormalized predictions against the dataset's raw targets,
/// using the model's embedded standardizer and target mapping.
double evaluate_mae(const nn::MlpModel& model, const feat::Dataset& dataset);

/// MAE of the constant train-mean predictor.
double baseline_mae(double train_target_mean, const feat::Dataset& dataset);

/// Predicted rates for every row, in row order.
std::vector<double> predict(const nn::MlpModel& model, const feat::Dataset& dataset);

/// Row-level random split, stratified per sector so every sector with >= 5
/// labels lands in both parts. Deterministic in the seed.
std::pair<feat::Dataset, feat::Dataset> split_80_20(const feat::Dataset& dataset, std::uint64_t seed);

/// Plain k-fold cross-validation; each fold trains from scratch.
std::vector<EvalReport> cross_validate(const feat::Dataset& dataset, const TrainConfig& cfg, int k);

/// Paired k-fold comparison of raw-label training against smoothed-label
/// training. Folds partition the raw dataset's cells; the smoothed run
/// trains on every smoothed row outside the held-out cells, and both runs
/// are validated against the held-out fold's raw targets.
struct PairedCvResult {
  std::vector<EvalReport> raw;
  std::vector<EvalReport> smoothed;
};
PairedCvResult cross_validate_paired(const feat::Dataset& raw_dataset, const feat::Dataset& smoothed_dataset,
                                     const TrainConfig& cfg, int k);

/// `cv_curves.csv`: fold,epoch,val_mae
void save_cv_curves(const std::vector<EvalReport>& reports, const std::filesystem::path& path);

}  // namespace parkcast::train
