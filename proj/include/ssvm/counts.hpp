#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ssvm {

/// Per-sample support-pair statistics. l_plus[i]/sigma_plus[i] aggregate
/// over SV+_i = { s : y_s > y_i, f_s < f_i + 1 } for uncensored i;
/// l_minus[i]/sigma_minus[i] over SV-_i = { s : y_s < y_i, f_s > f_i - 1,
/// delta_s = 1 }. sigma sums the supplied value vector v over each set.
struct SurvivalCounts {
  std::vector<std::int64_t> l_plus;
  std::vector<std::int64_t> l_minus;
  Eigen::VectorXd sigma_plus;
  Eigen::VectorXd sigma_minus;

  std::int64_t support_pairs() const {  // m_beta
    std::int64_t m = 0;
    for (auto c : l_plus) m += c;
    return m;
  }
};

/// Fenwick tree over rank-compressed keys holding (count, compensated sum)
/// aggregates; insertion and prefix/suffix queries in O(log n).
class RankAggregator {
 public:
  explicit RankAggregator(const Eigen::VectorXd& keys);

  void insert(double key, double value);

  struct Aggregate {
    std::int64_t count = 0;
    double sum = 0.0;
  };

  /// Aggregate over inserted entries with key strictly below the threshold.
  Aggregate below(double threshold) const;
  /// Aggregate over inserted entries with key strictly above the threshold.
  Aggregate above(double threshold) const;

  std::int64_t size() const { return total_count_; }

 private:
  Aggregate prefix(std::size_t ranks) const;  // first `ranks` key slots

  std::vector<double> keys_;  // sorted unique
  std::vector<std::int64_t> count_;
  std::vector<double> sum_;
  std::vector<double> comp_;  // Kahan compensation per node
  std::int64_t total_count_ = 0;
  double total_sum_ = 0.0;
  double total_comp_ = 0.0;
};

/// O(n log n) path: two sorted sweeps over a RankAggregator, inserting each
/// tie-group of y only after the group's queries are answered.
SurvivalCounts survival_counts(const Eigen::VectorXd& y,
                               const std::vector<std::uint8_t>& delta,
                               const Eigen::VectorXd& f,
                               const Eigen::VectorXd& v);

/// O(n^2) double-loop reference with the identical contract.
SurvivalCounts naive_survival_counts(const Eigen::VectorXd& y,
                                     const std::vector<std::uint8_t>& delta,
                                     const Eigen::VectorXd& f,
                                     const Eigen::VectorXd& v);

}  // namespace ssvm
