#include "parkcast/nn/model.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "parkcast/core/error.hpp"
#include "parkcast/core/rng.hpp"

namespace parkcast::nn {

namespace {

constexpr int kCheckpointVersion = 1;

// Keeps sigmoid outputs strictly inside (0, 1): for |z| > ~37 the exact
// sigmoid rounds to 0.0 or 1.0 in double precision.
constexpr double kOutputMargin = 1e-15;

void validate_architecture(const std::vector<int>& dims, const ResidualSpec& residual) {
  if (dims.size() < 3) {
    throw core::ValidationError("model needs at least one hidden layer");
  }
  for (int d : dims) {
    if (d < 1) {
      throw core::ValidationError("layer widths must be positive");
    }
  }
  if (dims.back() != 1) {
    throw core::ValidationError("output layer width must be 1");
  }
  const int hidden = static_cast<int>(dims.size()) - 2;
  if (residual.source_hidden < 1 || residual.dest_hidden <= residual.source_hidden ||
      residual.dest_hidden > hidden) {
    throw core::ValidationError("residual spec must satisfy 1 <= source < dest <= hidden layers");
  }
  if (dims[residual.source_hidden] != dims[residual.dest_hidden]) {
    throw core::ValidationError(
        "residual source width " + std::to_string(dims[residual.source_hidden]) +
        " != destination width " + std::to_string(dims[residual.dest_hidden]));
  }
}

}  // namespace

std::vector<int> default_dims() { return {28, 512, 256, 128, 64, 128, 32, 1}; }

MlpModel init(std::uint64_t seed, const std::vector<int>& dims, const ResidualSpec& residual) {
  validate_architecture(dims, residual);
  MlpModel model;
  model.dims = dims;
  model.residual = residual;
  core::Rng rng = core::Rng::fork(seed, 0xda7a1u);
  for (size_t k = 0; k + 1 < dims.size(); ++k) {
    const int fan_in = dims[k];
    const int fan_out = dims[k + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = rng.uniform(-bound, bound);
      }
    }
    model.weights.push_back(std::move(w));
    model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return model;
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::MatrixXd& inputs, ForwardCache* cache,
                        bool with_residual) {
  if (inputs.cols() != model.input_dim()) {
    throw core::ValidationError("input width " + std::to_string(inputs.cols()) + " != model input dim " +
                                std::to_string(model.input_dim()));
  }
  const int layers = model.layer_count();
  ForwardCache local;
  ForwardCache& c = cache != nullptr ? *cache : local;
  c.pre.assign(layers, Eigen::MatrixXd());
  c.act.assign(layers + 1, Eigen::MatrixXd());
  c.act[0] = inputs;

  for (int k = 0; k < layers - 1; ++k) {
    Eigen::MatrixXd z = c.act[k] * model.weights[k].transpose();
    z.rowwise() += model.biases[k].transpose();
    if (with_residual && k + 1 == model.residual.dest_hidden) {
      z += c.act[model.residual.source_hidden];
    }
    c.pre[k] = std::move(z);
    c.act[k + 1] = c.pre[k].cwiseMax(0.0);
  }

  Eigen::MatrixXd z_out = c.act[layers - 1] * model.weights[layers - 1].transpose();
  z_out.rowwise() += model.biases[layers - 1].transpose();
  c.pre[layers - 1] = z_out;

  Eigen::VectorXd out(inputs.rows());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double s = 1.0 / (1.0 + std::exp(-z_out(i, 0)));
    out(i) = std::min(1.0 - kOutputMargin, std::max(kOutputMargin, s));
  }
  return out;
}

Gradients Gradients::zeros_like(const MlpModel& model) {
  Gradients g;
  for (size_t k = 0; k + 1 < model.dims.size(); ++k) {
    g.weights.push_back(Eigen::MatrixXd::Zero(model.dims[k + 1], model.dims[k]));
    g.biases.push_back(Eigen::VectorXd::Zero(model.dims[k + 1]));
  }
  return g;
}

Gradients backward(const MlpModel& model, const ForwardCache& cache, const Eigen::VectorXd& dloss_doutput,
                   bool with_residual) {
  const int layers = model.layer_count();
  if (cache.pre.size() != static_cast<size_t>(layers) || cache.act.size() != static_cast<size_t>(layers + 1)) {
    throw core::ValidationError("forward cache does not match model");
  }
  if (dloss_doutput.size() != cache.act[0].rows()) {
    throw core::ValidationError("upstream gradient size does not match cached batch");
  }

  Gradients grads = Gradients::zeros_like(model);

  // Output layer: d sigmoid(z) / dz = s (1 - s).
  const Eigen::MatrixXd& z_out = cache.pre[layers - 1];
  Eigen::MatrixXd dz(z_out.rows(), 1);
  for (Eigen::Index i = 0; i < z_out.rows(); ++i) {
    const double s = 1.0 / (1.0 + std::exp(-z_out(i, 0)));
    dz(i, 0) = dloss_doutput(i) * s * (1.0 - s);
  }
  grads.weights[layers - 1] = dz.transpose() * cache.act[layers - 1];
  grads.biases[layers - 1] = dz.colwise().sum().transpose();

  // dact[k] accumulates dLoss/d act[k]; the skip adds a second contribution.
  std::vector<Eigen::MatrixXd> dact(layers + 1);
  dact[layers - 1] = dz * model.weights[layers - 1];

  for (int k = layers - 2; k >= 0; --k) {
    Eigen::MatrixXd dz_k =
        ((cache.pre[k].array() > 0.0).cast<double>() * dact[k + 1].array()).matrix();
    grads.weights[k] = dz_k.transpose() * cache.act[k];
    grads.biases[k] = dz_k.colwise().sum().transpose();
    if (dact[k].size() == 0) {
      dact[k] = dz_k * model.weights[k];
    } else {
      dact[k] += dz_k * model.weights[k];
    }
    if (with_residual && k + 1 == model.residual.dest_hidden) {
      const int src = model.residual.source_hidden;
      if (dact[src].size() == 0) {
        dact[src] = dz_k;
      } else {
        dact[src] += dz_k;
      }
    }
  }
  return grads;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format_version"] = kCheckpointVersion;
  j["dims"] = model.dims;
  j["residual"] = {{"source_hidden", model.residual.source_hidden},
                   {"dest_hidden", model.residual.dest_hidden}};
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (size_t k = 0; k < model.weights.size(); ++k) {
    const Eigen::MatrixXd& w = model.weights[k];
    std::vector<double> flat(static_cast<size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        flat[static_cast<size_t>(r) * w.cols() + c] = w(r, c);  // row-major
      }
    }
    weights.push_back(flat);
    biases.push_back(std::vector<double>(model.biases[k].data(), model.biases[k].data() + model.biases[k].size()));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  if (model.standardizer.has_value()) {
    j["standardizer"] = {{"means", model.standardizer->means()}, {"stds", model.standardizer->stds()}};
  } else {
    j["standardizer"] = nullptr;
  }
  j["train_target_mean"] = model.train_target_mean;
  j["target_lo"] = model.target_lo;
  j["target_hi"] = model.target_hi;

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw core::Error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw core::Error("cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw core::ParseError(path.string() + ": " + e.what());
  }

  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointVersion) {
      throw core::ParseError(path.string() + ": unsupported checkpoint version " + std::to_string(version) +
                             ", expected " + std::to_string(kCheckpointVersion));
    }
    MlpModel model;
    model.dims = j.at("dims").get<std::vector<int>>();
    model.residual.source_hidden = j.at("residual").at("source_hidden").get<int>();
    model.residual.dest_hidden = j.at("residual").at("dest_hidden").get<int>();
    validate_architecture(model.dims, model.residual);

    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    const size_t layers = model.dims.size() - 1;
    if (weights.size() != layers || biases.size() != layers) {
      throw core::ParseError(path.string() + ": expected " + std::to_string(layers) +
                             " weight/bias layers, got " + std::to_string(weights.size()) + "/" +
                             std::to_string(biases.size()));
    }
    for (size_t k = 0; k < layers; ++k) {
      const int rows = model.dims[k + 1];
      const int cols = model.dims[k];
      const auto flat = weights[k].get<std::vector<double>>();
      if (flat.size() != static_cast<size_t>(rows) * cols) {
        throw core::ParseError(path.string() + ": layer " + std::to_string(k) + " weights have " +
                               std::to_string(flat.size()) + " values, expected " + std::to_string(rows) +
                               "x" + std::to_string(cols));
      }
      Eigen::MatrixXd w(rows, cols);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          w(r, c) = flat[static_cast<size_t>(r) * cols + c];
        }
      }
      const auto b = biases[k].get<std::vector<double>>();
      if (b.size() != static_cast<size_t>(rows)) {
        throw core::ParseError(path.string() + ": layer " + std::to_string(k) + " biases have " +
                               std::to_string(b.size()) + " values, expected " + std::to_string(rows));
      }
      model.weights.push_back(std::move(w));
      model.biases.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
    }

    if (!j.at("standardizer").is_null()) {
      model.standardizer = feat::Standardizer::from_stats(
          j.at("standardizer").at("means").get<std::vector<double>>(),
          j.at("standardizer").at("stds").get<std::vector<double>>());
    }
    model.train_target_mean = j.at("train_target_mean").get<double>();
    model.target_lo = j.at("target_lo").get<double>();
    model.target_hi = j.at("target_hi").get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw core::ParseError(path.string() + ": " + e.what());
  } catch (const core::ValidationError& e) {
    throw core::ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace parkcast::nn
