#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace ssvm {

enum class FeatureKind { continuous, categorical };

/// Describes one column of a survival dataset. Categorical columns carry
/// their level labels; continuous columns get their observed [min, max]
/// filled in at fit time (needed by the clinical kernel).
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::continuous;
  std::vector<std::string> levels;  // categorical only
  double range_min = 0.0;           // continuous only, filled at fit time
  double range_max = 0.0;
  bool has_range = false;
};

/// Right-censored survival data: features X, observed times y and event
/// indicators delta. Categorical columns of X hold level indices; the
/// dummy-coded expansion used by linear/RBF kernels is derived on demand.
struct SurvivalDataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::uint8_t> delta;
  std::vector<FeatureSpec> specs;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index num_events() const {
    Eigen::Index c = 0;
    for (auto d : delta) c += d ? 1 : 0;
    return c;
  }
  void validate() const;  // throws std::invalid_argument on broken invariants
};

/// Per-column standardization statistics, computed on training data and
/// re-applied verbatim to test data. Categorical and constant columns pass
/// through untouched.
struct StandardizationStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;               // population (1/n) denominator
  std::vector<std::uint8_t> scaled;     // 1 if column was standardized
  std::vector<std::uint8_t> constant;   // 1 if continuous but constant
};

SurvivalDataset load_csv(const std::string& path,
                         const std::vector<FeatureSpec>& schema,
                         const std::string& time_column,
                         const std::string& event_column);

void save_csv(const std::string& path, const SurvivalDataset& d,
              const std::string& time_column = "time",
              const std::string& event_column = "event");

std::pair<SurvivalDataset, StandardizationStats> standardize(
    const SurvivalDataset& d);

Eigen::MatrixXd apply_standardization(const StandardizationStats& stats,
                                      const Eigen::MatrixXd& X);

/// Expands categorical columns to one-hot indicators; continuous columns are
/// copied. Column order: for each spec in order, its 1 or |levels| columns.
Eigen::MatrixXd dummy_encode(const Eigen::MatrixXd& X,
                             const std::vector<FeatureSpec>& specs);

/// Fills observed_range of every continuous spec from the given matrix.
std::vector<FeatureSpec> fill_ranges(const std::vector<FeatureSpec>& specs,
                                     const Eigen::MatrixXd& X);

}  // namespace ssvm
