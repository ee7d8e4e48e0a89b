#include "parkcast/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "parkcast/core/csv.hpp"
#include "parkcast/core/error.hpp"
#include "parkcast/core/rng.hpp"

namespace parkcast::train {

namespace {

constexpr std::uint64_t kStreamShuffle = 11;
constexpr std::uint64_t kStreamSubsample = 12;
constexpr std::uint64_t kStreamSplit = 13;
constexpr std::uint64_t kStreamFolds = 14;

constexpr Eigen::Index kEvalChunk = 4096;

using CellKey = std::tuple<std::string, std::int64_t, int>;

CellKey cell_key(const feat::DataRow& row) {
  return CellKey{row.sector_id, core::to_day_number(row.date), row.slot};
}

Eigen::MatrixXd standardized_matrix(const feat::Dataset& dataset, const feat::Standardizer& standardizer) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(dataset.size()), feat::kFeatureDim);
  for (size_t i = 0; i < dataset.size(); ++i) {
    const feat::FeatureVector z = standardizer.apply(dataset.rows[i].features);
    for (int c = 0; c < feat::kFeatureDim; ++c) {
      x(static_cast<Eigen::Index>(i), c) = z[c];
    }
  }
  return x;
}

double denorm_value(double yhat, double lo, double hi) {
  return std::clamp((yhat - lo) / (hi - lo), 0.0, 1.0);
}

/// MAE of denormalized outputs against raw targets, evaluated in chunks.
double mae_on_matrix(const nn::MlpModel& model, const Eigen::MatrixXd& x, const std::vector<double>& raw_targets) {
  double abs_sum = 0.0;
  for (Eigen::Index start = 0; start < x.rows(); start += kEvalChunk) {
    const Eigen::Index count = std::min(kEvalChunk, x.rows() - start);
    const Eigen::VectorXd out = nn::forward(model, x.middleRows(start, count));
    for (Eigen::Index i = 0; i < count; ++i) {
      const double pred = denorm_value(out(i), model.target_lo, model.target_hi);
      abs_sum += std::abs(pred - raw_targets[static_cast<size_t>(start + i)]);
    }
  }
  return abs_sum / static_cast<double>(x.rows());
}

std::vector<double> raw_targets_of(const feat::Dataset& dataset) {
  std::vector<double> t;
  t.reserve(dataset.size());
  for (const feat::DataRow& row : dataset.rows) {
    t.push_back(row.target);
  }
  return t;
}

feat::Dataset take_rows(const feat::Dataset& dataset, const std::vector<size_t>& indices) {
  feat::Dataset out;
  out.rows.reserve(indices.size());
  for (size_t i : indices) {
    out.rows.push_back(dataset.rows[i]);
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  // lr0 == 0 is admitted as a diagnostic mode: training must then leave the
  // initialized weights bit-identical.
  if (!(lr0 >= 0.0)) throw core::ValidationError("lr0 must be nonnegative");
  if (!(decay > 0.0)) throw core::ValidationError("decay must be positive");
  if (epochs < 1) throw core::ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw core::ValidationError("batch_size must be >= 1");
  if (!(target_lo > 0.0 && target_lo < target_hi && target_hi < 1.0)) {
    throw core::ValidationError("targets must satisfy 0 < target_lo < target_hi < 1");
  }
  if (max_train_rows < 0) throw core::ValidationError("max_train_rows must be >= 0");
}

double renorm_target(double y, const TrainConfig& cfg) {
  return cfg.target_lo + (cfg.target_hi - cfg.target_lo) * y;
}

double denorm_pred(double yhat, const TrainConfig& cfg) {
  return denorm_value(yhat, cfg.target_lo, cfg.target_hi);
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
  if (cfg.epochs < 2) {
    return cfg.lr0;
  }
  if (epoch < 0 || epoch >= cfg.epochs) {
    throw core::ValidationError("epoch " + std::to_string(epoch) + " out of range [0, " +
                                std::to_string(cfg.epochs - 1) + "]");
  }
  const double progress = static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1);
  return cfg.lr0 * std::pow(cfg.decay, progress);
}

AdamaxState AdamaxState::zeros_like(const nn::MlpModel& model) {
  AdamaxState s;
  for (size_t k = 0; k + 1 < model.dims.size(); ++k) {
    s.m_weights.push_back(Eigen::MatrixXd::Zero(model.dims[k + 1], model.dims[k]));
    s.u_weights.push_back(Eigen::MatrixXd::Zero(model.dims[k + 1], model.dims[k]));
    s.m_biases.push_back(Eigen::VectorXd::Zero(model.dims[k + 1]));
    s.u_biases.push_back(Eigen::VectorXd::Zero(model.dims[k + 1]));
  }
  return s;
}

void adamax_step(nn::MlpModel& model, const nn::Gradients& grads, AdamaxState& state, double lr_t,
                 const TrainConfig& cfg) {
  const size_t layers = model.weights.size();
  if (grads.weights.size() != layers || state.m_weights.size() != layers) {
    throw core::ValidationError("adamax_step: shape mismatch");
  }
  state.step += 1;
  const double bias_correction = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double scale = lr_t / bias_correction;

  for (size_t k = 0; k < layers; ++k) {
    if (!grads.weights[k].allFinite() || !grads.biases[k].allFinite()) {
      throw core::Error("non-finite gradient at layer " + std::to_string(k) + ", step " +
                        std::to_string(state.step));
    }
    state.m_weights[k] = cfg.beta1 * state.m_weights[k] + (1.0 - cfg.beta1) * grads.weights[k];
    state.u_weights[k] = (cfg.beta2 * state.u_weights[k]).cwiseMax(grads.weights[k].cwiseAbs());
    model.weights[k].array() -=
        scale * state.m_weights[k].array() / (state.u_weights[k].array() + cfg.eps);

    state.m_biases[k] = cfg.beta1 * state.m_biases[k] + (1.0 - cfg.beta1) * grads.biases[k];
    state.u_biases[k] = (cfg.beta2 * state.u_biases[k]).cwiseMax(grads.biases[k].cwiseAbs());
    model.biases[k].array() -= scale * state.m_biases[k].array() / (state.u_biases[k].array() + cfg.eps);
  }
}

TrainResult train(const feat::Dataset& train_set, const feat::Dataset& val_set, const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.empty()) {
    throw core::ValidationError("train: empty training set");
  }
  if (val_set.empty()) {
    throw core::ValidationError("train: empty validation set");
  }

  // Deterministic subsample when a row budget is set.
  feat::Dataset subsampled;
  const feat::Dataset* used = &train_set;
  if (cfg.max_train_rows > 0 && train_set.size() > static_cast<size_t>(cfg.max_train_rows)) {
    std::vector<size_t> indices(train_set.size());
    for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    core::Rng rng = core::Rng::fork(cfg.seed, kStreamSubsample);
    rng.shuffle(indices);
    indices.resize(static_cast<size_t>(cfg.max_train_rows));
    std::sort(indices.begin(), indices.end());
    subsampled = take_rows(train_set, indices);
    used = &subsampled;
  }

  TrainResult result;
  const feat::Standardizer standardizer = feat::Standardizer::fit([&] {
    std::vector<feat::FeatureVector> rows;
    rows.reserve(used->size());
    for (const feat::DataRow& r : used->rows) rows.push_back(r.features);
    return rows;
  }());

  const Eigen::MatrixXd x_train = standardized_matrix(*used, standardizer);
  const Eigen::MatrixXd x_val = standardized_matrix(val_set, standardizer);
  const std::vector<double> val_targets = raw_targets_of(val_set);

  const size_t n = used->size();
  Eigen::VectorXd y_renorm(static_cast<Eigen::Index>(n));
  double target_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double y = used->rows[i].target;
    target_sum += y;
    y_renorm(static_cast<Eigen::Index>(i)) = renorm_target(y, cfg);
  }

  nn::MlpModel model = nn::init(cfg.seed);
  model.standardizer = standardizer;
  model.train_target_mean = target_sum / static_cast<double>(n);
  model.target_lo = cfg.target_lo;
  model.target_hi = cfg.target_hi;

  AdamaxState state = AdamaxState::zeros_like(model);
  core::Rng shuffle_rng = core::Rng::fork(cfg.seed, kStreamShuffle);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  EvalReport& report = result.report;
  report.train_target_mean = model.train_target_mean;
  report.n_train = n;
  report.n_val = val_set.size();
  report.best_epoch = 0;
  double best_mae = std::numeric_limits<double>::infinity();

  const auto batch = static_cast<size_t>(cfg.batch_size);
  Eigen::MatrixXd x_batch;
  Eigen::VectorXd y_batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg);
    shuffle_rng.shuffle(order);
    double epoch_sq_sum = 0.0;
    for (size_t start = 0; start < n; start += batch) {
      const size_t count = std::min(batch, n - start);
      x_batch.resize(static_cast<Eigen::Index>(count), feat::kFeatureDim);
      y_batch.resize(static_cast<Eigen::Index>(count));
      for (size_t i = 0; i < count; ++i) {
        x_batch.row(static_cast<Eigen::Index>(i)) = x_train.row(static_cast<Eigen::Index>(order[start + i]));
        y_batch(static_cast<Eigen::Index>(i)) = y_renorm(static_cast<Eigen::Index>(order[start + i]));
      }
      nn::ForwardCache cache;
      const Eigen::VectorXd out = nn::forward(model, x_batch, &cache);
      const Eigen::VectorXd residual = out - y_batch;
      const double batch_sq = residual.squaredNorm();
      if (!std::isfinite(batch_sq)) {
        throw core::Error("non-finite training loss at epoch " + std::to_string(epoch));
      }
      epoch_sq_sum += batch_sq;
      const Eigen::VectorXd dloss = (2.0 / static_cast<double>(count)) * residual;
      const nn::Gradients grads = nn::backward(model, cache, dloss);
      adamax_step(model, grads, state, lr, cfg);
    }
    report.train_mse.push_back(epoch_sq_sum / static_cast<double>(n));
    const double val_mae = mae_on_matrix(model, x_val, val_targets);
    report.curve.push_back(EpochPoint{epoch, val_mae});
    if (val_mae < best_mae) {
      best_mae = val_mae;
      report.best_epoch = epoch;
    }
  }

  report.mae = report.curve.back().val_mae;
  report.mae_baseline = baseline_mae(model.train_target_mean, val_set);
  result.model = std::move(model);
  return result;
}

double evaluate_mae(const nn::MlpModel& model, const feat::Dataset& dataset) {
  if (dataset.empty()) {
    throw core::ValidationError("evaluate_mae: empty dataset");
  }
  if (!model.standardizer.has_value()) {
    throw core::ValidationError("evaluate_mae: model has no embedded standardizer");
  }
  const Eigen::MatrixXd x = standardized_matrix(dataset, *model.standardizer);
  return mae_on_matrix(model, x, raw_targets_of(dataset));
}

double baseline_mae(double train_target_mean, const feat::Dataset& dataset) {
  if (dataset.empty()) {
    throw core::ValidationError("baseline_mae: empty dataset");
  }
  double abs_sum = 0.0;
  for (const feat::DataRow& row : dataset.rows) {
    abs_sum += std::abs(train_target_mean - row.target);
  }
  return abs_sum / static_cast<double>(dataset.size());
}

std::vector<double> predict(const nn::MlpModel& model, const feat::Dataset& dataset) {
  if (!model.standardizer.has_value()) {
    throw core::ValidationError("predict: model has no embedded standardizer");
  }
  const Eigen::MatrixXd x = standardized_matrix(dataset, *model.standardizer);
  std::vector<double> preds;
  preds.reserve(dataset.size());
  for (Eigen::Index start = 0; start < x.rows(); start += kEvalChunk) {
    const Eigen::Index count = std::min(kEvalChunk, x.rows() - start);
    const Eigen::VectorXd out = nn::forward(model, x.middleRows(start, count));
    for (Eigen::Index i = 0; i < count; ++i) {
      preds.push_back(denorm_value(out(i), model.target_lo, model.target_hi));
    }
  }
  return preds;
}

std::pair<feat::Dataset, feat::Dataset> split_80_20(const feat::Dataset& dataset, std::uint64_t seed) {
  if (dataset.size() < 5) {
    throw core::ValidationError("split_80_20 needs at least 5 rows, got " + std::to_string(dataset.size()));
  }
  std::map<std::string, std::vector<size_t>> by_sector;
  for (size_t i = 0; i < dataset.size(); ++i) {
    by_sector[dataset.rows[i].sector_id].push_back(i);
  }

  core::Rng rng = core::Rng::fork(seed, kStreamSplit);
  std::vector<size_t> test_indices;
  std::vector<size_t> pool;  // sectors too small to stratify
  for (auto& [sector_id, indices] : by_sector) {
    if (indices.size() < 5) {
      pool.insert(pool.end(), indices.begin(), indices.end());
      continue;
    }
    rng.shuffle(indices);
    const auto n_test = std::max<size_t>(
        1, static_cast<size_t>(std::llround(0.2 * static_cast<double>(indices.size()))));
    test_indices.insert(test_indices.end(), indices.begin(), indices.begin() + static_cast<long>(n_test));
  }
  if (!pool.empty()) {
    rng.shuffle(pool);
    const auto n_test = static_cast<size_t>(std::llround(0.2 * static_cast<double>(pool.size())));
    test_indices.insert(test_indices.end(), pool.begin(), pool.begin() + static_cast<long>(n_test));
  }

  std::set<size_t> test_set(test_indices.begin(), test_indices.end());
  feat::Dataset train_ds;
  feat::Dataset test_ds;
  for (size_t i = 0; i < dataset.size(); ++i) {
    (test_set.count(i) != 0 ? test_ds : train_ds).rows.push_back(dataset.rows[i]);
  }
  return {std::move(train_ds), std::move(test_ds)};
}

std::vector<EvalReport> cross_validate(const feat::Dataset& dataset, const TrainConfig& cfg, int k) {
  if (k < 2) {
    throw core::ValidationError("cross_validate needs k >= 2");
  }
  if (static_cast<size_t>(k) > dataset.size()) {
    throw core::ValidationError("cross_validate: k exceeds row count");
  }
  std::vector<size_t> order(dataset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  core::Rng rng = core::Rng::fork(cfg.seed, kStreamFolds);
  rng.shuffle(order);

  std::vector<EvalReport> reports;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<size_t> train_idx;
    std::vector<size_t> val_idx;
    for (size_t pos = 0; pos < order.size(); ++pos) {
      (static_cast<int>(pos % static_cast<size_t>(k)) == fold ? val_idx : train_idx).push_back(order[pos]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());

    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = core::Rng::fork(cfg.seed, 1000 + static_cast<std::uint64_t>(fold)).next_u64();
    TrainResult r = train(take_rows(dataset, train_idx), take_rows(dataset, val_idx), fold_cfg);
    r.report.fold = fold;
    reports.push_back(std::move(r.report));
  }
  return reports;
}

PairedCvResult cross_validate_paired(const feat::Dataset& raw_dataset, const feat::Dataset& smoothed_dataset,
                                     const TrainConfig& cfg, int k) {
  if (k < 2) {
    throw core::ValidationError("cross_validate_paired needs k >= 2");
  }
  if (static_cast<size_t>(k) > raw_dataset.size()) {
    throw core::ValidationError("cross_validate_paired: k exceeds raw row count");
  }

  std::vector<size_t> order(raw_dataset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  core::Rng rng = core::Rng::fork(cfg.seed, kStreamFolds);
  rng.shuffle(order);

  PairedCvResult result;
  for (int fold = 0; fold < k; ++fold) {
    std::vector<size_t> train_idx;
    std::vector<size_t> val_idx;
    for (size_t pos = 0; pos < order.size(); ++pos) {
      (static_cast<int>(pos % static_cast<size_t>(k)) == fold ? val_idx : train_idx).push_back(order[pos]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
    const feat::Dataset val_ds = take_rows(raw_dataset, val_idx);

    std::set<CellKey> held_out;
    for (const feat::DataRow& row : val_ds.rows) {
      held_out.insert(cell_key(row));
    }
    feat::Dataset smoothed_train;
    for (const feat::DataRow& row : smoothed_dataset.rows) {
      if (held_out.count(cell_key(row)) == 0) {
        smoothed_train.rows.push_back(row);
      }
    }

    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = core::Rng::fork(cfg.seed, 1000 + static_cast<std::uint64_t>(fold)).next_u64();
    TrainResult raw_run = train(take_rows(raw_dataset, train_idx), val_ds, fold_cfg);
    raw_run.report.fold = fold;
    result.raw.push_back(std::move(raw_run.report));

    TrainResult smoothed_run = train(smoothed_train, val_ds, fold_cfg);
    smoothed_run.report.fold = fold;
    result.smoothed.push_back(std::move(smoothed_run.report));
  }
  return result;
}

void save_cv_curves(const std::vector<EvalReport>& reports, const std::filesystem::path& path) {
  core::CsvWriter writer(path, {"fold", "epoch", "val_mae"});
  for (const EvalReport& report : reports) {
    for (const EpochPoint& point : report.curve) {
      writer.row({std::to_string(report.fold), std::to_string(point.epoch), core::format_double(point.val_mae)});
    }
  }
  writer.close();
}

}  // namespace parkcast::train
