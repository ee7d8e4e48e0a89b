#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "parkcast/core/error.hpp"
#include "parkcast/core/rng.hpp"
#include "parkcast/train/trainer.hpp"

using namespace parkcast;

namespace {

feat::DataRow make_row(core::Rng& rng, const std::string& sector, double target) {
  feat::DataRow row;
  for (double& v : row.features) v = rng.uniform(-1.0, 1.0);
  row.sector_id = sector;
  row.date = core::Date{2022, 3, 4};
  row.slot = static_cast<int>(rng.uniform_int(0, 11));
  row.target = target;
  return row;
}

/// Targets separable on feature 0; the smoke-test workload.
feat::Dataset threshold_dataset(int n, std::uint64_t seed) {
  core::Rng rng(seed);
  feat::Dataset d;
  for (int i = 0; i < n; ++i) {
    feat::DataRow row = make_row(rng, "S" + std::to_string(i % 7 + 1), 0.0);
    row.target = row.features[0] > 0.0 ? 0.7 : 0.2;
    d.rows.push_back(std::move(row));
  }
  return d;
}

feat::Dataset constant_dataset(int n, double target, std::uint64_t seed) {
  core::Rng rng(seed);
  feat::Dataset d;
  for (int i = 0; i < n; ++i) {
    d.rows.push_back(make_row(rng, "S" + std::to_string(i % 5 + 1), target));
  }
  return d;
}

bool weights_bit_equal(const nn::MlpModel& a, const nn::MlpModel& b) {
  for (size_t k = 0; k < a.weights.size(); ++k) {
    if (!(a.weights[k].array() == b.weights[k].array()).all()) return false;
    if (!(a.biases[k].array() == b.biases[k].array()).all()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("target renormalization and its inverse") {
  const train::TrainConfig cfg;
  CHECK(train::renorm_target(0.0, cfg) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(train::renorm_target(1.0, cfg) == doctest::Approx(0.9).epsilon(1e-15));
  for (double y : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(train::denorm_pred(train::renorm_target(y, cfg), cfg) == doctest::Approx(y).epsilon(1e-15));
  }
  CHECK(train::denorm_pred(0.05, cfg) == 0.0);  // clamped below target_lo
  CHECK(train::denorm_pred(0.95, cfg) == 1.0);  // clamped above target_hi
}

TEST_CASE("learning-rate schedule decays to lr0 * decay") {
  train::TrainConfig cfg;
  cfg.epochs = 101;
  CHECK(train::lr_schedule(0, cfg) == 0.001);
  CHECK(train::lr_schedule(100, cfg) == doctest::Approx(0.00025).epsilon(1e-12));
  CHECK(train::lr_schedule(50, cfg) == doctest::Approx(0.0005).epsilon(1e-9));

  cfg.epochs = 1;
  CHECK(train::lr_schedule(0, cfg) == 0.001);  // too short to decay

  cfg.epochs = 10;
  CHECK_THROWS_AS(train::lr_schedule(10, cfg), core::ValidationError);
}

TEST_CASE("adamax step matches the hand-evaluated update") {
  const std::vector<int> dims = {2, 3, 3, 1};
  const nn::ResidualSpec residual{1, 2};
  nn::MlpModel model = nn::init(1, dims, residual);
  for (auto& w : model.weights) w.setZero();

  nn::Gradients grads = nn::Gradients::zeros_like(model);
  grads.weights[0](0, 0) = 2.0;

  train::TrainConfig cfg;
  train::AdamaxState state = train::AdamaxState::zeros_like(model);
  train::adamax_step(model, grads, state, 0.001, cfg);

  CHECK(state.step == 1);
  CHECK(state.m_weights[0](0, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(state.u_weights[0](0, 0) == 2.0);
  CHECK(model.weights[0](0, 0) == doctest::Approx(-0.001).epsilon(1e-8));

  // Parameters with zero gradient never move.
  CHECK(model.weights[0](1, 1) == 0.0);
  CHECK(model.biases[0](0) == 0.0);
}

TEST_CASE("adamax accumulator never decays faster than beta2") {
  const std::vector<int> dims = {2, 3, 3, 1};
  nn::MlpModel model = nn::init(2, dims, nn::ResidualSpec{1, 2});
  train::TrainConfig cfg;
  train::AdamaxState state = train::AdamaxState::zeros_like(model);
  core::Rng rng(3);
  for (int step = 0; step < 50; ++step) {
    nn::Gradients grads = nn::Gradients::zeros_like(model);
    for (size_t k = 0; k < grads.weights.size(); ++k) {
      for (Eigen::Index r = 0; r < grads.weights[k].rows(); ++r) {
        for (Eigen::Index c = 0; c < grads.weights[k].cols(); ++c) {
          grads.weights[k](r, c) = rng.normal();
        }
      }
    }
    const auto prev = state.u_weights;
    train::adamax_step(model, grads, state, 0.001, cfg);
    for (size_t k = 0; k < prev.size(); ++k) {
      CHECK(((state.u_weights[k] - cfg.beta2 * prev[k]).array() >= -1e-15).all());
    }
  }
}

TEST_CASE("adamax rejects non-finite gradients") {
  nn::MlpModel model = nn::init(4, {2, 3, 3, 1}, nn::ResidualSpec{1, 2});
  nn::Gradients grads = nn::Gradients::zeros_like(model);
  grads.weights[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
  train::TrainConfig cfg;
  train::AdamaxState state = train::AdamaxState::zeros_like(model);
  CHECK_THROWS_WITH_AS(train::adamax_step(model, grads, state, 0.001, cfg),
                       doctest::Contains("non-finite"), core::Error);
}

TEST_CASE("training is deterministic and lr 0 freezes the initialization") {
  feat::Dataset data = threshold_dataset(60, 5);
  auto [train_ds, val_ds] = train::split_80_20(data, 1);

  train::TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 16;
  cfg.seed = 9;

  const train::TrainResult a = train::train(train_ds, val_ds, cfg);
  const train::TrainResult b = train::train(train_ds, val_ds, cfg);
  CHECK(weights_bit_equal(a.model, b.model));
  REQUIRE(a.report.curve.size() == 3);
  CHECK(a.report.curve.back().val_mae == b.report.curve.back().val_mae);

  cfg.lr0 = 0.0;
  const train::TrainResult frozen = train::train(train_ds, val_ds, cfg);
  CHECK(weights_bit_equal(frozen.model, nn::init(cfg.seed)));
}

TEST_CASE("training loss decreases on a separable toy set") {
  feat::Dataset data = threshold_dataset(200, 6);
  auto [train_ds, val_ds] = train::split_80_20(data, 2);

  train::TrainConfig cfg;
  cfg.epochs = 10;
  cfg.batch_size = 32;
  cfg.seed = 3;
  const train::TrainResult result = train::train(train_ds, val_ds, cfg);
  REQUIRE(result.report.train_mse.size() == 10);
  for (size_t e = 1; e < result.report.train_mse.size(); ++e) {
    CHECK(result.report.train_mse[e] <= result.report.train_mse[e - 1] * 1.05);
  }
  CHECK(result.report.train_mse.back() < result.report.train_mse.front());
}

TEST_CASE("training fits a constant target") {
  feat::Dataset data = constant_dataset(120, 0.4, 7);
  auto [train_ds, val_ds] = train::split_80_20(data, 3);

  train::TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 32;
  cfg.seed = 4;
  const train::TrainResult result = train::train(train_ds, val_ds, cfg);
  const std::vector<double> preds = train::predict(result.model, val_ds);
  for (double p : preds) {
    CHECK(std::abs(p - 0.4) < 0.02);
  }
}

TEST_CASE("training rejects degenerate inputs") {
  train::TrainConfig cfg;
  cfg.epochs = 1;
  CHECK_THROWS_AS(train::train(feat::Dataset{}, constant_dataset(10, 0.4, 1), cfg),
                  core::ValidationError);

  feat::Dataset nan_targets = constant_dataset(40, 0.4, 2);
  nan_targets.rows[5].target = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(train::train(nan_targets, constant_dataset(10, 0.4, 3), cfg), core::Error);
}

TEST_CASE("evaluate_mae and baseline_mae") {
  // All-0.5 targets with zero weights: sigmoid(0) = 0.5 denormalizes to 0.5.
  feat::Dataset data = constant_dataset(50, 0.5, 8);
  nn::MlpModel model = nn::init(5);
  for (auto& w : model.weights) w.setZero();
  std::vector<feat::FeatureVector> rows;
  for (const auto& r : data.rows) rows.push_back(r.features);
  model.standardizer = feat::Standardizer::fit(rows);
  CHECK(train::evaluate_mae(model, data) <= 1e-12);

  // Constant predictor 0.5 against targets {0.3, 0.7}.
  feat::Dataset two = constant_dataset(2, 0.3, 9);
  two.rows[1].target = 0.7;
  CHECK(train::baseline_mae(0.5, two) == doctest::Approx(0.2).epsilon(1e-15));

  // Baseline equals the mean absolute deviation around the train mean.
  core::Rng rng(10);
  feat::Dataset random_targets;
  for (int i = 0; i < 64; ++i) {
    random_targets.rows.push_back(make_row(rng, "S1", rng.uniform()));
  }
  const double mean = 0.37;
  double direct = 0.0;
  for (const auto& r : random_targets.rows) direct += std::abs(mean - r.target);
  direct /= 64.0;
  CHECK(train::baseline_mae(mean, random_targets) == doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("evaluate_mae is invariant under row permutation") {
  feat::Dataset data = threshold_dataset(80, 11);
  auto [train_ds, val_ds] = train::split_80_20(data, 4);
  train::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.seed = 12;
  const train::TrainResult result = train::train(train_ds, val_ds, cfg);

  feat::Dataset reversed = val_ds;
  std::reverse(reversed.rows.begin(), reversed.rows.end());
  CHECK(train::evaluate_mae(result.model, val_ds) ==
        doctest::Approx(train::evaluate_mae(result.model, reversed)).epsilon(1e-12));
}

TEST_CASE("the 80/20 split partitions and stratifies") {
  feat::Dataset data = threshold_dataset(100, 13);
  auto [train_ds, test_ds] = train::split_80_20(data, 5);
  CHECK(train_ds.size() == 80);
  CHECK(test_ds.size() == 20);

  // Disjoint and exhaustive on (sector, date, slot, feature-0) identity.
  auto key = [](const feat::DataRow& r) {
    return std::make_tuple(r.sector_id, r.slot, r.features[0], r.target);
  };
  std::set<std::tuple<std::string, int, double, double>> seen;
  for (const auto& r : train_ds.rows) seen.insert(key(r));
  for (const auto& r : test_ds.rows) seen.insert(key(r));
  CHECK(seen.size() == 100);

  // Every sector appears in both splits (each has ~14 rows here).
  std::set<std::string> train_sectors, test_sectors;
  for (const auto& r : train_ds.rows) train_sectors.insert(r.sector_id);
  for (const auto& r : test_ds.rows) test_sectors.insert(r.sector_id);
  CHECK(train_sectors.size() == 7);
  CHECK(test_sectors.size() == 7);

  // Deterministic in the seed.
  auto [train2, test2] = train::split_80_20(data, 5);
  CHECK(train2.size() == train_ds.size());
  for (size_t i = 0; i < test2.rows.size(); ++i) {
    CHECK(test2.rows[i].sector_id == test_ds.rows[i].sector_id);
    CHECK(test2.rows[i].target == test_ds.rows[i].target);
  }

  CHECK_THROWS_AS(train::split_80_20(constant_dataset(4, 0.5, 1), 1), core::ValidationError);
}

TEST_CASE("cross-validation partitions rows into k folds") {
  feat::Dataset data = threshold_dataset(60, 14);
  train::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 16;
  cfg.seed = 6;
  const auto reports = train::cross_validate(data, cfg, 4);
  REQUIRE(reports.size() == 4);
  size_t total_val = 0;
  for (const auto& r : reports) {
    CHECK(r.curve.size() == 2);
    CHECK(r.n_train + r.n_val == 60);
    total_val += r.n_val;
  }
  CHECK(total_val == 60);  // every row validates exactly once

  CHECK_THROWS_AS(train::cross_validate(data, cfg, 1), core::ValidationError);
  CHECK_THROWS_AS(train::cross_validate(data, cfg, 61), core::ValidationError);

  const auto path = std::filesystem::temp_directory_path() / "parkcast_cv_test.csv";
  train::save_cv_curves(reports, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 4 * 2);  // header + k * epochs
}
