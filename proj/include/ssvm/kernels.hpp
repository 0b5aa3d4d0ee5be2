#pragma once

#include "ssvm/data.hpp"

#include <Eigen/Core>

namespace ssvm {

enum class KernelKind { linear, rbf, clinical };

struct KernelConfig {
  KernelKind kind = KernelKind::linear;
  double sigma = 0.0;    // rbf bandwidth; <= 0 means "resolve at fit time"
  double ridge = 1e-10;  // added to the Gram diagonal
  std::vector<FeatureSpec> specs;  // clinical: kinds + filled ranges

  static KernelConfig linear(double ridge = 1e-10);
  static KernelConfig rbf(double sigma, double ridge = 1e-10);
  static KernelConfig clinical(std::vector<FeatureSpec> specs,
                               double ridge = 1e-10);
};

struct GramMatrix {
  Eigen::MatrixXd K;
  KernelConfig config;
};

double kernel_eval(const KernelConfig& config, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b);

/// Gram matrix with ridge on the diagonal. Computes the upper triangle and
/// mirrors, so the result is bit-exactly symmetric. Parallelized over rows.
GramMatrix gram(const KernelConfig& config, const Eigen::MatrixXd& X);

/// Single-threaded reference producing bit-identical output to gram().
GramMatrix gram_serial(const KernelConfig& config, const Eigen::MatrixXd& X);

/// Entry [j][i] = k(x_new_j, x_train_i); no ridge.
Eigen::MatrixXd cross_gram(const KernelConfig& config,
                           const Eigen::MatrixXd& X_train,
                           const Eigen::MatrixXd& X_new);

/// Median pairwise Euclidean distance, the default RBF bandwidth. Rows are
/// subsampled deterministically above `cap` samples.
double median_pairwise_distance(const Eigen::MatrixXd& X,
                                Eigen::Index cap = 1000);

/// Row-parallel symmetric matrix-vector product with a deterministic
/// per-row reduction.
Eigen::VectorXd symv(const Eigen::MatrixXd& K, const Eigen::VectorXd& v);

}  // namespace ssvm
