#include "parkcast/feat/standardize.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "parkcast/core/error.hpp"

namespace parkcast::feat {

Standardizer Standardizer::fit(const std::vector<FeatureVector>& rows) {
  if (rows.size() < 2) {
    throw core::ValidationError("standardizer needs at least 2 rows, got " + std::to_string(rows.size()));
  }
  Standardizer s;
  s.means_.assign(kFeatureDim, 0.0);
  s.stds_.assign(kFeatureDim, 1.0);
  const double n = static_cast<double>(rows.size());
  for (const FeatureVector& v : rows) {
    for (int c = 0; c < kFeatureDim; ++c) s.means_[c] += v[c];
  }
  for (int c = 0; c < kFeatureDim; ++c) s.means_[c] /= n;
  std::vector<double> var(kFeatureDim, 0.0);
  for (const FeatureVector& v : rows) {
    for (int c = 0; c < kFeatureDim; ++c) {
      const double d = v[c] - s.means_[c];
      var[c] += d * d;
    }
  }
  for (int c = 0; c < kFeatureDim; ++c) {
    const double sigma = std::sqrt(var[c] / n);
    if (sigma > 0.0) {
      s.stds_[c] = sigma;
    } else {
      // Zero-variance column: values pass through apply() unchanged.
      s.means_[c] = 0.0;
      s.stds_[c] = 1.0;
    }
  }
  s.fitted_ = true;
  return s;
}

Standardizer Standardizer::from_stats(std::vector<double> means, std::vector<double> stds) {
  if (means.size() != kFeatureDim || stds.size() != kFeatureDim) {
    throw core::ValidationError("standardizer stats must have " + std::to_string(kFeatureDim) + " columns");
  }
  for (double s : stds) {
    if (!(s > 0.0)) {
      throw core::ValidationError("standardizer stds must be positive");
    }
  }
  Standardizer s;
  s.means_ = std::move(means);
  s.stds_ = std::move(stds);
  s.fitted_ = true;
  return s;
}

FeatureVector Standardizer::apply(const FeatureVector& v) const {
  if (!fitted_) {
    throw core::ValidationError("standardizer not fitted");
  }
  FeatureVector z{};
  for (int c = 0; c < kFeatureDim; ++c) {
    z[c] = (v[c] - means_[c]) / stds_[c];
  }
  return z;
}

FeatureVector Standardizer::invert(const FeatureVector& z) const {
  if (!fitted_) {
    throw core::ValidationError("standardizer not fitted");
  }
  FeatureVector v{};
  for (int c = 0; c < kFeatureDim; ++c) {
    v[c] = z[c] * stds_[c] + means_[c];
  }
  return v;
}

void save_standardizer(const Standardizer& s, const std::filesystem::path& path) {
  nlohmann::json j;
  j["means"] = s.means();
  j["stds"] = s.stds();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw core::Error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

Standardizer load_standardizer(const std::filesystem::path& path) {
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
    return Standardizer::from_stats(j.at("means").get<std::vector<double>>(),
                                    j.at("stds").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw core::ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace parkcast::feat
