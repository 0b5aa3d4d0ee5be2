#pragma once

#include "ssvm/counts.hpp"
#include "ssvm/pairs.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ssvm {

/// Everything fixed during one training run: precomputed Gram matrix,
/// outcomes and the regularization trade-off gamma. Gamma 0 is allowed so
/// tests can exercise the pure quadratic term.
struct ObjectiveContext {
  const Eigen::MatrixXd& K;
  const Eigen::VectorXd& y;
  const std::vector<std::uint8_t>& delta;
  double gamma;
};

// -- Fast path (order-statistic aggregation, no pair list) ------------------

double objective(const ObjectiveContext& ctx, const Eigen::VectorXd& beta);

Eigen::VectorXd gradient(const ObjectiveContext& ctx,
                         const Eigen::VectorXd& beta);

/// One counting sweep yields objective and gradient together.
void objective_and_gradient(const ObjectiveContext& ctx,
                            const Eigen::VectorXd& beta, double& value,
                            Eigen::VectorXd& grad);

/// Generalized-Hessian product at the support set of `beta`. `f` must be
/// K*beta for that beta; passing it avoids recomputing inside CG loops.
Eigen::VectorXd hessvec(const ObjectiveContext& ctx, const Eigen::VectorXd& f,
                        const Eigen::VectorXd& v);

Eigen::VectorXd hessvec_at(const ObjectiveContext& ctx,
                           const Eigen::VectorXd& beta,
                           const Eigen::VectorXd& v);

// -- Naive path (explicit pair list) ----------------------------------------

double naive_objective(const Eigen::MatrixXd& K, const PairList& pairs,
                       const Eigen::VectorXd& beta, double gamma);

Eigen::VectorXd naive_gradient(const Eigen::MatrixXd& K, const PairList& pairs,
                               const Eigen::VectorXd& beta, double gamma);

Eigen::VectorXd naive_hessvec(const Eigen::MatrixXd& K, const PairList& pairs,
                              const Eigen::VectorXd& beta, double gamma,
                              const Eigen::VectorXd& v);

}  // namespace ssvm
