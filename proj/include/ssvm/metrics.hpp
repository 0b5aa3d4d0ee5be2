#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ssvm {

struct ConcordanceResult {
  double cindex = 0.0;
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t tied_score = 0;
  std::int64_t comparable = 0;
};

/// Harrell's concordance index over the comparable pairs (y_i > y_j,
/// delta_j = 1). The pair counts concordant iff score_j > score_i (shorter
/// survival, higher risk); tied scores credit 0.5. Throws when no pair is
/// comparable.
ConcordanceResult harrell_c(const Eigen::VectorXd& y,
                            const std::vector<std::uint8_t>& delta,
                            const Eigen::VectorXd& scores);

}  // namespace ssvm
