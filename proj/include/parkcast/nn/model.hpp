#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "parkcast/feat/standardize.hpp"

namespace parkcast::nn {

/// Residual skip: output of hidden layer `source_hidden` added to the
/// pre-activation of hidden layer `dest_hidden` (1-based hidden indices).
struct ResidualSpec {
  int source_hidden{3};
  int dest_hidden{5};
};

/// Default architecture: 28 -> 512 -> 256 -> 128 -> 64 -> 128 -> 32 -> 1,
/// ReLU hidden activations, sigmoid output, skip from hidden 3 to hidden 5.
std::vector<int> default_dims();

/// Fully-connected residual network. Weights are (out x in); activations are
/// batched row-wise. Models are immutable values: training produces updated
/// copies via the optimizer, never in-place aliasing across threads.
struct MlpModel {
  std::vector<int> dims;  // [input, hidden..., 1]
  ResidualSpec residual;
  std::vector<Eigen::MatrixXd> weights;  // weights[k]: dims[k+1] x dims[k]
  std::vector<Eigen::VectorXd> biases;   // biases[k]: dims[k+1]

  // Checkpoint metadata so a saved model is usable on raw datasets alone.
  std::optional<feat::Standardizer> standardizer;
  double train_target_mean{0.5};
  double target_lo{0.1};
  double target_hi{0.9};

  int input_dim() const { return dims.front(); }
  int hidden_count() const { return static_cast<int>(dims.size()) - 2; }
  int layer_count() const { return static_cast<int>(dims.size()) - 1; }
};

/// He-uniform weights (bound sqrt(6/fan_in)), zero biases; deterministic in
/// the seed. Validates the residual spec against the dims.
MlpModel init(std::uint64_t seed, const std::vector<int>& dims = default_dims(),
              const ResidualSpec& residual = ResidualSpec{});

/// Per-layer pre-activations and activations kept for the backward pass.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> pre;  // pre[k]: batch x dims[k+1]
  std::vector<Eigen::MatrixXd> act;  // act[0] = input, act[k]: batch x dims[k]
};

/// Batched forward pass over standardized inputs (rows = examples).
/// Outputs are strictly inside (0, 1). `with_residual = false` evaluates the
/// same weights as a plain feedforward stack (diagnostics only).
Eigen::VectorXd forward(const MlpModel& model, const Eigen::MatrixXd& inputs,
                        ForwardCache* cache = nullptr, bool with_residual = true);

/// Gradient shapes mirror the model's weights and biases.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static Gradients zeros_like(const MlpModel& model);
};

/// Analytic gradients for the batch recorded in `cache`, given dLoss/dOutput
/// per example. The skip connection contributes a second path into the
/// source layer's activation gradient.
Gradients backward(const MlpModel& model, const ForwardCache& cache,
                   const Eigen::VectorXd& dloss_doutput, bool with_residual = true);

/// Versioned JSON checkpoint; save -> load is bit-exact.
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace parkcast::nn
