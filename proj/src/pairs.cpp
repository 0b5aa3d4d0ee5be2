#include "ssvm/pairs.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssvm {

namespace {

void check_lengths(const Eigen::VectorXd& y,
                   const std::vector<std::uint8_t>& delta) {
  if (y.size() != static_cast<Eigen::Index>(delta.size())) {
    throw std::invalid_argument("pairs: y and delta lengths disagree");
  }
}

}  // namespace

PairList comparable_pairs(const Eigen::VectorXd& y,
                          const std::vector<std::uint8_t>& delta) {
  check_lengths(y, delta);
  PairList out;
  const Eigen::Index n = y.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (y[i] > y[j] && delta[static_cast<std::size_t>(j)]) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

PairList reduced_pairs(const Eigen::VectorXd& y,
                       const std::vector<std::uint8_t>& delta) {
  check_lengths(y, delta);
  PairList out;
  const Eigen::Index n = y.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!delta[static_cast<std::size_t>(j)] || !(y[i] > y[j])) continue;
      if (best < 0 || y[j] > y[best]) best = j;  // ties keep smallest index
    }
    if (best >= 0) out.emplace_back(i, best);
  }
  return out;
}

std::size_t count_comparable_pairs(const Eigen::VectorXd& y,
                                   const std::vector<std::uint8_t>& delta) {
  check_lengths(y, delta);
  // sort by time; for each uncensored j, count strictly later times
  const Eigen::Index n = y.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return y[a] < y[b]; });
  std::size_t total = 0;
  std::size_t pos = 0;
  while (pos < order.size()) {
    std::size_t end = pos;
    while (end < order.size() && y[order[end]] == y[order[pos]]) ++end;
    const std::size_t later = order.size() - end;
    for (std::size_t k = pos; k < end; ++k) {
      if (delta[static_cast<std::size_t>(order[k])]) total += later;
    }
    pos = end;
  }
  return total;
}

}  // namespace ssvm
