#include "ssvm/metrics.hpp"

#include <stdexcept>

namespace ssvm {

ConcordanceResult harrell_c(const Eigen::VectorXd& y,
                            const std::vector<std::uint8_t>& delta,
                            const Eigen::VectorXd& scores) {
  const Eigen::Index n = y.size();
  if (static_cast<Eigen::Index>(delta.size()) != n || scores.size() != n) {
    throw std::invalid_argument("harrell_c: lengths disagree");
  }
  ConcordanceResult r;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!delta[static_cast<std::size_t>(j)]) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(y[i] > y[j])) continue;
      ++r.comparable;
      if (scores[j] > scores[i]) {
        ++r.concordant;
      } else if (scores[j] < scores[i]) {
        ++r.discordant;
      } else {
        ++r.tied_score;
      }
    }
  }
  if (r.comparable == 0) {
    throw std::runtime_error("harrell_c: no comparable pairs");
  }
  r.cindex = (static_cast<double>(r.concordant) +
              0.5 * static_cast<double>(r.tied_score)) /
             static_cast<double>(r.comparable);
  return r;
}

}  // namespace ssvm
