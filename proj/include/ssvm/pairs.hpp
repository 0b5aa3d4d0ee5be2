#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace ssvm {

/// Ordered comparable pairs (i, j): y_i > y_j and delta_j = 1. Indices are
/// 0-based.
using PairList = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

/// Every pair satisfying the strict predicate; tied times never pair.
PairList comparable_pairs(const Eigen::VectorXd& y,
                          const std::vector<std::uint8_t>& delta);

/// Van Belle reduction: per sample i, the single pair (i, j) where j is the
/// uncensored sample of maximal y_j below y_i (smallest index on ties).
PairList reduced_pairs(const Eigen::VectorXd& y,
                       const std::vector<std::uint8_t>& delta);

std::size_t count_comparable_pairs(const Eigen::VectorXd& y,
                                   const std::vector<std::uint8_t>& delta);

}  // namespace ssvm
