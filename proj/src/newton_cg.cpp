#include "ssvm/newton_cg.hpp"

#include <cmath>
#include <stdexcept>

namespace ssvm {

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::gradient_tol:
      return "gradient_tol";
    case TerminationReason::max_newton:
      return "max_newton";
    case TerminationReason::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

int cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& H,
             const Eigen::VectorXd& g, double forcing, int max_cg,
             Eigen::VectorXd& d) {
  const Eigen::Index n = g.size();
  d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = -g;  // residual of H d = -g at d = 0
  const double b_norm = r.norm();
  if (b_norm == 0.0) return 0;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  int iters = 0;
  while (iters < max_cg) {
    const Eigen::VectorXd Hp = H(p);
    const double pHp = p.dot(Hp);
    if (pHp <= 1e-14 * p.squaredNorm()) {
      if (iters == 0) d = p;  // steepest-descent fallback
      break;
    }
    const double alpha = rr / pHp;
    d += alpha * p;
    r -= alpha * Hp;
    ++iters;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= forcing * b_norm) break;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return iters;
}

std::pair<Eigen::VectorXd, OptimizerReport> minimize(
    ObjectiveProblem& problem, const Eigen::VectorXd& beta0,
    const OptimizerOptions& opts) {
  if (beta0.size() != problem.dim()) {
    throw std::invalid_argument("minimize: beta0 dimension mismatch");
  }
  const int max_cg =
      opts.max_cg > 0 ? opts.max_cg : static_cast<int>(problem.dim());

  Eigen::VectorXd beta = beta0;
  Eigen::VectorXd grad;
  double value = problem.value_and_gradient(beta, grad);
  if (!std::isfinite(value)) {
    throw std::runtime_error("minimize: non-finite objective at start");
  }
  const double g0_scale = std::max(1.0, grad.lpNorm<Eigen::Infinity>());

  OptimizerReport report;
  Eigen::VectorXd best_beta = beta;
  double best_value = value;

  for (int iter = 0; iter < opts.max_newton; ++iter) {
    const double grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (grad_norm <= opts.grad_tol * g0_scale) {
      report.reason = TerminationReason::gradient_tol;
      report.final_objective = value;
      report.final_grad_norm = grad_norm;
      return {best_beta, report};
    }

    problem.prepare(beta);
    // Eisenstat-Walker style forcing: loose solves far from the optimum
    const double forcing = std::min(0.5, std::sqrt(grad_norm));
    Eigen::VectorXd d;
    const int cg_iters = cg_solve(
        [&](const Eigen::VectorXd& v) { return problem.hessian_vector(v); },
        grad, forcing, max_cg, d);

    const double slope = grad.dot(d);
    double step = 1.0;
    bool accepted = false;
    double trial_value = value;
    Eigen::VectorXd trial;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      trial = beta + step * d;
      trial_value = problem.value(trial);
      if (std::isfinite(trial_value) &&
          trial_value <= value + opts.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= opts.backtrack_factor;
    }
    if (!accepted) {
      report.reason = TerminationReason::line_search_failure;
      report.final_objective = value;
      report.final_grad_norm = grad_norm;
      return {best_beta, report};
    }

    beta = trial;
    value = problem.value_and_gradient(beta, grad);
    if (!std::isfinite(value)) {
      throw std::runtime_error("minimize: non-finite objective at iteration " +
                               std::to_string(iter + 1));
    }
    if (value < best_value) {
      best_value = value;
      best_beta = beta;
    }
    report.iterations.push_back(
        {value, grad.lpNorm<Eigen::Infinity>(), cg_iters, step});
    if (opts.on_iteration) {
      opts.on_iteration(iter + 1, value, grad.lpNorm<Eigen::Infinity>(),
                        cg_iters, step);
    }
  }

  const double grad_norm = grad.lpNorm<Eigen::Infinity>();
  report.reason = grad_norm <= opts.grad_tol * g0_scale
                      ? TerminationReason::gradient_tol
                      : TerminationReason::max_newton;
  report.final_objective = value;
  report.final_grad_norm = grad_norm;
  return {best_beta, report};
}

}  // namespace ssvm
