#pragma once

#include "ssvm/data.hpp"
#include "ssvm/kernels.hpp"
#include "ssvm/newton_cg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ssvm {

enum class PairMode { full, reduced };

/// Fitted kernel survival SVM: coefficients beta over the retained
/// (preprocessed) training points, plus everything needed to map new raw
/// feature rows through the same preprocessing.
struct TrainedModel {
  Eigen::VectorXd beta;
  Eigen::MatrixXd X_train;  // preprocessed training features
  KernelConfig kernel;
  StandardizationStats stats;
  std::vector<FeatureSpec> specs;  // raw input layout
  double gamma = 0.0;
  PairMode pair_mode = PairMode::full;
  OptimizerReport report;
};

/// Standardizes (refit on d), encodes features for the kernel, builds the
/// Gram matrix, and runs truncated Newton from beta = 0. pair_mode reduced
/// trains the Van Belle baseline over the reduced pair list.
TrainedModel fit(const SurvivalDataset& d, const KernelConfig& kernel,
                 double gamma, const OptimizerOptions& opts,
                 PairMode pair_mode = PairMode::full);

/// Risk scores for raw-layout rows; higher score = higher risk.
Eigen::VectorXd predict(const TrainedModel& m, const Eigen::MatrixXd& X_new);

struct GridSearchResult {
  double best_gamma = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_cindex;  // aligned with grid
};

/// Mean validation c-index over `n_splits` random
/// 80/20 splits per gamma; ties break toward smaller gamma. The caller
/// refits on the full data with the winner.
GridSearchResult grid_search(const SurvivalDataset& d,
                             const KernelConfig& kernel,
                             const std::vector<double>& grid,
                             const OptimizerOptions& opts, int n_splits = 10,
                             double train_frac = 0.8, std::uint64_t seed = 0,
                             PairMode pair_mode = PairMode::full);

/// 2^-12, 2^-10, ..., 2^12.
std::vector<double> default_gamma_grid();

void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace ssvm
