#include "ssvm/counts.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssvm {

namespace {

inline void kahan_add(double& sum, double& comp, double value) {
  const double yv = value - comp;
  const double t = sum + yv;
  comp = (t - sum) - yv;
  sum = t;
}

}  // namespace

RankAggregator::RankAggregator(const Eigen::VectorXd& keys)
    : keys_(keys.data(), keys.data() + keys.size()) {
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  count_.assign(keys_.size() + 1, 0);
  sum_.assign(keys_.size() + 1, 0.0);
  comp_.assign(keys_.size() + 1, 0.0);
}

void RankAggregator::insert(double key, double value) {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) {
    throw std::invalid_argument("RankAggregator: key was not registered");
  }
  for (std::size_t i = static_cast<std::size_t>(it - keys_.begin()) + 1;
       i <= keys_.size(); i += i & (~i + 1)) {
    ++count_[i];
    kahan_add(sum_[i], comp_[i], value);
  }
  ++total_count_;
  kahan_add(total_sum_, total_comp_, value);
}

RankAggregator::Aggregate RankAggregator::prefix(std::size_t ranks) const {
  Aggregate a;
  double comp = 0.0;
  for (std::size_t i = ranks; i > 0; i -= i & (~i + 1)) {
    a.count += count_[i];
    kahan_add(a.sum, comp, sum_[i] - comp_[i]);
  }
  return a;
}

RankAggregator::Aggregate RankAggregator::below(double threshold) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), threshold);
  return prefix(static_cast<std::size_t>(it - keys_.begin()));
}

RankAggregator::Aggregate RankAggregator::above(double threshold) const {
  const auto it = std::upper_bound(keys_.begin(), keys_.end(), threshold);
  const Aggregate p = prefix(static_cast<std::size_t>(it - keys_.begin()));
  return {total_count_ - p.count, (total_sum_ - total_comp_) - p.sum};
}

SurvivalCounts survival_counts(const Eigen::VectorXd& y,
                               const std::vector<std::uint8_t>& delta,
                               const Eigen::VectorXd& f,
                               const Eigen::VectorXd& v) {
  const Eigen::Index n = y.size();
  if (static_cast<Eigen::Index>(delta.size()) != n || f.size() != n ||
      v.size() != n) {
    throw std::invalid_argument("survival_counts: lengths disagree");
  }
  SurvivalCounts c;
  c.l_plus.assign(static_cast<std::size_t>(n), 0);
  c.l_minus.assign(static_cast<std::size_t>(n), 0);
  c.sigma_plus = Eigen::VectorXd::Zero(n);
  c.sigma_minus = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return y[a] < y[b]; });

  // Sweep (a), descending y: samples already inserted have y_s > y_i.
  {
    RankAggregator agg(f);
    std::size_t pos = order.size();
    while (pos > 0) {
      std::size_t begin = pos;
      while (begin > 0 && y[order[begin - 1]] == y[order[pos - 1]]) --begin;
      for (std::size_t k = begin; k < pos; ++k) {
        const Eigen::Index i = order[k];
        if (!delta[static_cast<std::size_t>(i)]) continue;
        const auto a = agg.below(f[i] + 1.0);
        c.l_plus[static_cast<std::size_t>(i)] = a.count;
        c.sigma_plus[i] = a.sum;
      }
      for (std::size_t k = begin; k < pos; ++k) {
        const Eigen::Index s = order[k];
        agg.insert(f[s], v[s]);
      }
      pos = begin;
    }
  }

  // Sweep (b), ascending y: only uncensored samples enter the structure.
  {
    RankAggregator agg(f);
    std::size_t pos = 0;
    while (pos < order.size()) {
      std::size_t end = pos;
      while (end < order.size() && y[order[end]] == y[order[pos]]) ++end;
      for (std::size_t k = pos; k < end; ++k) {
        const Eigen::Index i = order[k];
        const auto a = agg.above(f[i] - 1.0);
        c.l_minus[static_cast<std::size_t>(i)] = a.count;
        c.sigma_minus[i] = a.sum;
      }
      for (std::size_t k = pos; k < end; ++k) {
        const Eigen::Index s = order[k];
        if (delta[static_cast<std::size_t>(s)]) agg.insert(f[s], v[s]);
      }
      pos = end;
    }
  }
  return c;
}

SurvivalCounts naive_survival_counts(const Eigen::VectorXd& y,
                                     const std::vector<std::uint8_t>& delta,
                                     const Eigen::VectorXd& f,
                                     const Eigen::VectorXd& v) {
  const Eigen::Index n = y.size();
  if (static_cast<Eigen::Index>(delta.size()) != n || f.size() != n ||
      v.size() != n) {
    throw std::invalid_argument("naive_survival_counts: lengths disagree");
  }
  SurvivalCounts c;
  c.l_plus.assign(static_cast<std::size_t>(n), 0);
  c.l_minus.assign(static_cast<std::size_t>(n), 0);
  c.sigma_plus = Eigen::VectorXd::Zero(n);
  c.sigma_minus = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index s = 0; s < n; ++s) {
      if (delta[static_cast<std::size_t>(i)] && y[s] > y[i] &&
          f[s] < f[i] + 1.0) {
        ++c.l_plus[static_cast<std::size_t>(i)];
        c.sigma_plus[i] += v[s];
      }
      if (delta[static_cast<std::size_t>(s)] && y[s] < y[i] &&
          f[s] > f[i] - 1.0) {
        ++c.l_minus[static_cast<std::size_t>(i)];
        c.sigma_minus[i] += v[s];
      }
    }
  }
  return c;
}

}  // namespace ssvm
