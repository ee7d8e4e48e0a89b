#pragma once

#include <filesystem>
#include <vector>

#include "parkcast/feat/features.hpp"

namespace parkcast::feat {

/// Per-column z-scoring. Statistics must come from training rows only;
/// columns with zero variance keep sigma = 1 so they pass through centered.
class Standardizer {
 public:
  Standardizer() = default;

  /// Population mean/stddev per column; requires at least 2 rows.
  static Standardizer fit(const std::vector<FeatureVector>& rows);

  /// Rebuilds from stored statistics (checkpoint loading).
  static Standardizer from_stats(std::vector<double> means, std::vector<double> stds);

  bool fitted() const { return fitted_; }
  FeatureVector apply(const FeatureVector& v) const;
  FeatureVector invert(const FeatureVector& z) const;

  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& stds() const { return stds_; }

 private:
  std::vector<double> means_;
  std::vector<double> stds_;
  bool fitted_{false};
};

/// `standardizer.json` with `means` and `stds` arrays.
void save_standardizer(const Standardizer& s, const std::filesystem::path& path);
Standardizer load_standardizer(const std::filesystem::path& path);

}  // namespace parkcast::feat
