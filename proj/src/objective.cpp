#include "ssvm/objective.hpp"

#include "ssvm/kernels.hpp"

#include <stdexcept>

namespace ssvm {

namespace {

void check_dims(const ObjectiveContext& ctx, const Eigen::VectorXd& beta) {
  const Eigen::Index n = ctx.K.rows();
  if (ctx.K.cols() != n || ctx.y.size() != n ||
      static_cast<Eigen::Index>(ctx.delta.size()) != n || beta.size() != n) {
    throw std::invalid_argument("objective: dimension mismatch");
  }
}

}  // namespace

void objective_and_gradient(const ObjectiveContext& ctx,
                            const Eigen::VectorXd& beta, double& value,
                            Eigen::VectorXd& grad) {
  check_dims(ctx, beta);
  const Eigen::VectorXd f = symv(ctx.K, beta);
  const SurvivalCounts c = survival_counts(ctx.y, ctx.delta, f, f);
  const Eigen::Index n = f.size();

  const auto m = static_cast<double>(c.support_pairs());
  double quad = 0.0;   // sum f_i ((l+ + l-) f_i - (s+ + s-))
  double cross = 0.0;  // sum f_i (l- - l+)
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l_sum = static_cast<double>(
        c.l_plus[static_cast<std::size_t>(i)] +
        c.l_minus[static_cast<std::size_t>(i)]);
    const double l_diff = static_cast<double>(
        c.l_minus[static_cast<std::size_t>(i)] -
        c.l_plus[static_cast<std::size_t>(i)]);
    const double s = c.sigma_plus[i] + c.sigma_minus[i];
    const double a = l_sum * f[i] - s;
    quad += f[i] * a;
    cross += f[i] * l_diff;
    w[i] = a - l_diff;
  }
  value = 0.5 * beta.dot(f) + 0.5 * ctx.gamma * (m + quad - 2.0 * cross);
  grad = f + ctx.gamma * symv(ctx.K, w);
}

double objective(const ObjectiveContext& ctx, const Eigen::VectorXd& beta) {
  double value;
  Eigen::VectorXd grad;
  objective_and_gradient(ctx, beta, value, grad);
  return value;
}

Eigen::VectorXd gradient(const ObjectiveContext& ctx,
                         const Eigen::VectorXd& beta) {
  double value;
  Eigen::VectorXd grad;
  objective_and_gradient(ctx, beta, value, grad);
  return grad;
}

Eigen::VectorXd hessvec(const ObjectiveContext& ctx, const Eigen::VectorXd& f,
                        const Eigen::VectorXd& v) {
  if (f.size() != ctx.K.rows() || v.size() != ctx.K.rows()) {
    throw std::invalid_argument("hessvec: dimension mismatch");
  }
  const Eigen::VectorXd g = symv(ctx.K, v);  // K v
  const SurvivalCounts c = survival_counts(ctx.y, ctx.delta, f, g);
  Eigen::VectorXd u(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double l_sum = static_cast<double>(
        c.l_plus[static_cast<std::size_t>(i)] +
        c.l_minus[static_cast<std::size_t>(i)]);
    u[i] = l_sum * g[i] - (c.sigma_plus[i] + c.sigma_minus[i]);
  }
  return g + ctx.gamma * symv(ctx.K, u);
}

Eigen::VectorXd hessvec_at(const ObjectiveContext& ctx,
                           const Eigen::VectorXd& beta,
                           const Eigen::VectorXd& v) {
  check_dims(ctx, beta);
  return hessvec(ctx, symv(ctx.K, beta), v);
}

double naive_objective(const Eigen::MatrixXd& K, const PairList& pairs,
                       const Eigen::VectorXd& beta, double gamma) {
  if (K.cols() != beta.size()) {
    throw std::invalid_argument("naive_objective: dimension mismatch");
  }
  const Eigen::VectorXd f = symv(K, beta);
  double penalty = 0.0;
  for (const auto& [i, j] : pairs) {
    const double margin = f[i] - f[j];
    if (margin < 1.0) {
      const double r = 1.0 - margin;
      penalty += r * r;
    }
  }
  return 0.5 * beta.dot(f) + 0.5 * gamma * penalty;
}

Eigen::VectorXd naive_gradient(const Eigen::MatrixXd& K, const PairList& pairs,
                               const Eigen::VectorXd& beta, double gamma) {
  if (K.cols() != beta.size()) {
    throw std::invalid_argument("naive_gradient: dimension mismatch");
  }
  const Eigen::VectorXd f = symv(K, beta);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(beta.size());
  for (const auto& [i, j] : pairs) {
    const double margin = f[i] - f[j];
    if (margin < 1.0) {
      const double r = 1.0 - margin;
      w[i] -= r;
      w[j] += r;
    }
  }
  return f + gamma * symv(K, w);
}

Eigen::VectorXd naive_hessvec(const Eigen::MatrixXd& K, const PairList& pairs,
                              const Eigen::VectorXd& beta, double gamma,
                              const Eigen::VectorXd& v) {
  if (K.cols() != beta.size() || v.size() != beta.size()) {
    throw std::invalid_argument("naive_hessvec: dimension mismatch");
  }
  const Eigen::VectorXd f = symv(K, beta);
  const Eigen::VectorXd g = symv(K, v);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(beta.size());
  for (const auto& [i, j] : pairs) {
    if (f[i] - f[j] < 1.0) {
      const double d = g[i] - g[j];
      u[i] += d;
      u[j] -= d;
    }
  }
  return g + gamma * symv(K, u);
}

}  // namespace ssvm
