#include "ssvm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssvm {

KernelConfig KernelConfig::linear(double ridge) {
  return KernelConfig{KernelKind::linear, 0.0, ridge, {}};
}

KernelConfig KernelConfig::rbf(double sigma, double ridge) {
  return KernelConfig{KernelKind::rbf, sigma, ridge, {}};
}

KernelConfig KernelConfig::clinical(std::vector<FeatureSpec> specs,
                                    double ridge) {
  return KernelConfig{KernelKind::clinical, 0.0, ridge, std::move(specs)};
}

namespace {

double clinical_eval(const std::vector<FeatureSpec>& specs,
                     const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto p = static_cast<Eigen::Index>(specs.size());
  if (a.size() != p || b.size() != p) {
    throw std::invalid_argument("clinical kernel: dimension mismatch");
  }
  double acc = 0.0;
  for (Eigen::Index c = 0; c < p; ++c) {
    const auto& s = specs[static_cast<std::size_t>(c)];
    if (s.kind == FeatureKind::categorical) {
      acc += a[c] == b[c] ? 1.0 : 0.0;
      continue;
    }
    if (!s.has_range) {
      throw std::invalid_argument("clinical kernel: spec '" + s.name +
                                  "' has no observed range");
    }
    const double r = s.range_max - s.range_min;
    if (r == 0.0) {
      // degenerate range falls back to the categorical rule
      acc += a[c] == b[c] ? 1.0 : 0.0;
      continue;
    }
    // clip out-of-sample values into the training range
    const double av = std::clamp(a[c], s.range_min, s.range_max);
    const double bv = std::clamp(b[c], s.range_min, s.range_max);
    acc += (r - std::abs(av - bv)) / r;
  }
  return acc / static_cast<double>(p);
}

}  // namespace

double kernel_eval(const KernelConfig& config, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  switch (config.kind) {
    case KernelKind::linear:
      return a.dot(b);
    case KernelKind::rbf: {
      if (!(config.sigma > 0.0)) {
        throw std::invalid_argument("kernel_eval: rbf sigma not set");
      }
      const double d2 = (a - b).squaredNorm();
      return std::exp(-d2 / (2.0 * config.sigma * config.sigma));
    }
    case KernelKind::clinical:
      return clinical_eval(config.specs, a, b);
  }
  throw std::logic_error("kernel_eval: unknown kernel kind");
}

namespace {

template <bool Parallel>
GramMatrix gram_impl(const KernelConfig& config, const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  if (n < 1) throw std::invalid_argument("gram: empty matrix");
  GramMatrix g;
  g.config = config;
  g.K.resize(n, n);
#pragma omp parallel for schedule(dynamic, 8) if (Parallel)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g.K(i, j) = kernel_eval(config, X.row(i), X.row(j));
    }
    g.K(i, i) += config.ridge;
  }
  // mirror the upper triangle
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) g.K(i, j) = g.K(j, i);
  }
  return g;
}

}  // namespace

GramMatrix gram(const KernelConfig& config, const Eigen::MatrixXd& X) {
  return gram_impl<true>(config, X);
}

GramMatrix gram_serial(const KernelConfig& config, const Eigen::MatrixXd& X) {
  return gram_impl<false>(config, X);
}

Eigen::MatrixXd cross_gram(const KernelConfig& config,
                           const Eigen::MatrixXd& X_train,
                           const Eigen::MatrixXd& X_new) {
  if (X_train.cols() != X_new.cols()) {
    throw std::invalid_argument("cross_gram: feature count mismatch");
  }
  Eigen::MatrixXd K(X_new.rows(), X_train.rows());
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < X_new.rows(); ++j) {
    for (Eigen::Index i = 0; i < X_train.rows(); ++i) {
      K(j, i) = kernel_eval(config, X_new.row(j), X_train.row(i));
    }
  }
  return K;
}

double median_pairwise_distance(const Eigen::MatrixXd& X, Eigen::Index cap) {
  const Eigen::Index n = X.rows();
  if (n < 2) return 1.0;
  // deterministic strided subsample
  std::vector<Eigen::Index> rows;
  const Eigen::Index stride = n > cap ? (n + cap - 1) / cap : 1;
  for (Eigen::Index i = 0; i < n; i += stride) rows.push_back(i);
  std::vector<double> dists;
  dists.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      dists.push_back((X.row(rows[a]) - X.row(rows[b])).norm());
    }
  }
  if (dists.empty()) return 1.0;
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2,
                   dists.end());
  const double med = dists[dists.size() / 2];
  return med > 0.0 ? med : 1.0;
}

Eigen::VectorXd symv(const Eigen::MatrixXd& K, const Eigen::VectorXd& v) {
  if (K.cols() != v.size()) {
    throw std::invalid_argument("symv: dimension mismatch");
  }
  Eigen::VectorXd out(K.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    out[i] = K.row(i).dot(v);
  }
  return out;
}

}  // namespace ssvm
