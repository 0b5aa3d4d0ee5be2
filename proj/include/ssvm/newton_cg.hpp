#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace ssvm {

struct OptimizerOptions {
  int max_newton = 200;
  double grad_tol = 1e-5;  // on ||g||_inf relative to max(1, ||g0||_inf)
  int max_cg = 0;          // 0: use problem dimension
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;
  std::function<void(int iter, double value, double grad_norm, int cg_iters,
                     double step)>
      on_iteration;  // optional verbose hook
};

enum class TerminationReason { gradient_tol, max_newton, line_search_failure };

struct IterationRecord {
  double objective = 0.0;
  double grad_norm = 0.0;
  int cg_iterations = 0;
  double step = 0.0;
};

struct OptimizerReport {
  std::vector<IterationRecord> iterations;
  TerminationReason reason = TerminationReason::max_newton;
  double final_objective = 0.0;
  double final_grad_norm = 0.0;
};

std::string to_string(TerminationReason r);

/// A twice-differentiable (generalized) objective exposed to the optimizer.
/// prepare(beta) fixes the support set; hessian_vector then applies the
/// generalized Hessian at that point.
class ObjectiveProblem {
 public:
  virtual ~ObjectiveProblem() = default;
  virtual Eigen::Index dim() const = 0;
  virtual double value(const Eigen::VectorXd& beta) const = 0;
  virtual double value_and_gradient(const Eigen::VectorXd& beta,
                                    Eigen::VectorXd& grad) const = 0;
  virtual void prepare(const Eigen::VectorXd& beta) = 0;
  virtual Eigen::VectorXd hessian_vector(const Eigen::VectorXd& v) const = 0;
};

/// Approximately solves H d = -g by conjugate gradient; stops when the
/// relative residual drops below `forcing` or after `max_cg` iterations.
/// Non-positive curvature returns the current iterate (the steepest-descent
/// direction if detected on the first iteration). Returns CG iterations used.
int cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& H,
             const Eigen::VectorXd& g, double forcing, int max_cg,
             Eigen::VectorXd& d);

std::pair<Eigen::VectorXd, OptimizerReport> minimize(
    ObjectiveProblem& problem, const Eigen::VectorXd& beta0,
    const OptimizerOptions& opts);

}  // namespace ssvm
