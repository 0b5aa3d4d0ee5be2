#pragma once

#include "ssvm/data.hpp"
#include "ssvm/rng.hpp"

#include <cstdint>
#include <optional>

namespace ssvm {

/// Bender-style synthetic survival data: Weibull event times driven by a
/// fixed nonlinear risk function over 13 raw features (age, sex, one 3-level
/// categorical, 10 correlated-free normals), uniform censoring on the
/// training split only.
struct SynthConfig {
  Eigen::Index n_train = 1500;
  Eigen::Index n_test = 1500;
  std::uint64_t seed = 0;
  std::optional<double> coeff_scale;  // nullopt: drawn from U[-1,1]
  double target_censoring = 0.2;
  double weibull_k = 1.0;
  double weibull_lambda = 0.9;
};

struct SynthResult {
  SurvivalDataset train;
  SurvivalDataset test;
  double realized_censoring = 0.0;  // fraction of censored training rows
  double coeff_scale = 1.0;
  double tau = 0.0;
};

/// Risk-function input layout (15 values): age, sex coded {1,2},
/// one-hot C1..C3, then N1..N10.
constexpr int kRiskInputDim = 15;

/// The fixed nonlinear risk model. Throws std::domain_error when a
/// denominator makes the result non-finite; callers redraw the sample.
double nonlinear_risk(const Eigen::VectorXd& x);

/// Inverse-CDF Weibull survival time: t = [(-log u)/(lambda e^risk)]^{1/k}.
double weibull_time(double u, double risk, double k, double lambda);

/// Chooses the uniform-censoring bound tau so the analytic expected censored
/// fraction, mean_i min(t_i, tau)/tau, hits the target. Bisection on
/// (0, 10 * max t].
double calibrate_tau(const std::vector<double>& event_times, double target);

SynthResult generate(const SynthConfig& config);

/// The raw dataset layout produced by generate(): age (continuous),
/// sex (categorical {m,f}), cat (categorical {c1,c2,c3}), N1..N10.
std::vector<FeatureSpec> synth_schema();

}  // namespace ssvm
