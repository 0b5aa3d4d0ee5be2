#include "ssvm/synth.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ssvm {

namespace {

constexpr std::array<double, 10> kNormalMeans = {0.0, 0.0,  0.3,  0.15, 0.8,
                                                 0.67, 0.2, 0.0, 0.12, 0.3};

struct RawSample {
  double age = 0.0;
  double sex = 1.0;  // coded {1, 2}
  int cat = 0;       // 0..2
  std::array<double, 10> normals{};
  double risk = 0.0;
};

Eigen::VectorXd risk_input(const RawSample& s) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(kRiskInputDim);
  x[0] = s.age;
  x[1] = s.sex;
  x[2 + s.cat] = 1.0;
  for (int i = 0; i < 10; ++i) x[5 + i] = s.normals[static_cast<std::size_t>(i)];
  return x;
}

/// Draw order per sample: age, sex, categorical, N1..N10. Redraws the whole
/// sample whenever the risk function is non-finite.
RawSample draw_sample(Rng& rng, double coeff_scale) {
  for (;;) {
    RawSample s;
    s.age = rng.uniform(18.0, 89.0);
    s.sex = rng.bernoulli(0.5) ? 2.0 : 1.0;
    s.cat = static_cast<int>(rng.below(3));
    // 10 normals = 5 full Box-Muller pairs, so no spare leaks across samples
    for (std::size_t i = 0; i < s.normals.size(); ++i) {
      s.normals[i] = kNormalMeans[i] + rng.normal();
    }
    double risk;
    try {
      risk = coeff_scale * nonlinear_risk(risk_input(s));
    } catch (const std::domain_error&) {
      continue;
    }
    s.risk = risk;
    return s;
  }
}

}  // namespace

double nonlinear_risk(const Eigen::VectorXd& x) {
  if (x.size() != kRiskInputDim) {
    throw std::invalid_argument("nonlinear_risk: expected " +
                                std::to_string(kRiskInputDim) + " inputs");
  }
  const double age = x[0], sex = x[1];
  const double c1 = x[2], c2 = x[3], c3 = x[4];
  const double n1 = x[5], n2 = x[6], n4 = x[8], n6 = x[10], n7 = x[11],
               n8 = x[12], n9 = x[13];
  const double f = 0.05 * age + 0.8 * sex + 0.03 * n1 * n1 +
                   0.3 / (n2 * n2) - 0.1 * n7 + 0.6 * n4 / n2 + n1 / n8 -
                   0.9 * std::tanh(n6) / n9 + 0.09 * c1 / sex +
                   0.03 * c2 / sex + 0.3 * c3 / sex;
  if (!std::isfinite(f)) {
    throw std::domain_error("nonlinear_risk: non-finite result");
  }
  return f;
}

double weibull_time(double u, double risk, double k, double lambda) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("weibull_time: u must lie in (0,1)");
  }
  if (!(k > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("weibull_time: k and lambda must be positive");
  }
  return std::pow(-std::log(u) / (lambda * std::exp(risk)), 1.0 / k);
}

double calibrate_tau(const std::vector<double>& event_times, double target) {
  if (event_times.empty()) {
    throw std::invalid_argument("calibrate_tau: no event times");
  }
  if (!(target > 0.0 && target < 1.0)) {
    throw std::invalid_argument("calibrate_tau: target must lie in (0,1)");
  }
  double max_t = 0.0;
  for (double t : event_times) max_t = std::max(max_t, t);

  // E[censored fraction] = mean_i min(t_i, tau)/tau, decreasing in tau from
  // 1 (tau -> 0) towards 0.
  auto expected = [&](double tau) {
    double s = 0.0;
    for (double t : event_times) s += std::min(t, tau) / tau;
    return s / static_cast<double>(event_times.size());
  };

  double min_t = max_t;
  for (double t : event_times) min_t = std::min(min_t, t);

  const double hi = 10.0 * max_t;
  if (expected(hi) > target) {
    throw std::runtime_error(
        "calibrate_tau: target censoring unreachable within tau <= 10*max t");
  }
  // times can span hundreds of orders of magnitude; bisect in log space
  double lo = 1e-3 * min_t;  // expected(lo) = 1 here
  double high = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(high);
    if (expected(mid) > target) {
      lo = mid;
    } else {
      high = mid;
    }
  }
  return std::sqrt(lo) * std::sqrt(high);
}

std::vector<FeatureSpec> synth_schema() {
  std::vector<FeatureSpec> specs;
  specs.push_back({"age", FeatureKind::continuous, {}, 0, 0, false});
  specs.push_back({"sex", FeatureKind::categorical, {"m", "f"}, 0, 0, false});
  specs.push_back(
      {"cat", FeatureKind::categorical, {"c1", "c2", "c3"}, 0, 0, false});
  for (int i = 1; i <= 10; ++i) {
    specs.push_back({"N" + std::to_string(i), FeatureKind::continuous, {}, 0,
                     0, false});
  }
  return specs;
}

namespace {

SurvivalDataset to_dataset(const std::vector<RawSample>& samples,
                           const std::vector<double>& times,
                           const std::vector<std::uint8_t>& events) {
  SurvivalDataset d;
  d.specs = synth_schema();
  const auto n = static_cast<Eigen::Index>(samples.size());
  d.X.resize(n, 13);
  d.y.resize(n);
  d.delta = events;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    d.X(i, 0) = s.age;
    d.X(i, 1) = s.sex - 1.0;  // level index
    d.X(i, 2) = static_cast<double>(s.cat);
    for (int c = 0; c < 10; ++c) {
      d.X(i, 3 + c) = s.normals[static_cast<std::size_t>(c)];
    }
    d.y[i] = times[static_cast<std::size_t>(i)];
  }
  d.validate();
  return d;
}

}  // namespace

SynthResult generate(const SynthConfig& config) {
  if (config.n_train <= 0 || config.n_test <= 0) {
    throw std::invalid_argument("generate: counts must be positive");
  }
  if (!(config.target_censoring >= 0.0 && config.target_censoring < 1.0)) {
    throw std::invalid_argument("generate: target_censoring outside [0,1)");
  }
  Rng rng(config.seed);

  // Stream order: coefficient scale, then train samples (features + u),
  // then test samples, then train censoring times.
  const double scale = config.coeff_scale ? *config.coeff_scale
                                          : rng.uniform(-1.0, 1.0);
  if (!(scale >= -1.0 && scale <= 1.0)) {
    throw std::invalid_argument("generate: coeff_scale outside [-1,1]");
  }

  auto draw_cohort = [&](Eigen::Index n, std::vector<RawSample>& samples,
                         std::vector<double>& times) {
    samples.reserve(static_cast<std::size_t>(n));
    times.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      // redraw until the time is positive and finite (extreme risks can
      // overflow exp and underflow t to 0)
      for (;;) {
        RawSample s = draw_sample(rng, scale);
        const double u = rng.uniform_open();
        const double t =
            weibull_time(u, s.risk, config.weibull_k, config.weibull_lambda);
        if (t > 0.0 && std::isfinite(t)) {
          samples.push_back(s);
          times.push_back(t);
          break;
        }
      }
    }
  };

  std::vector<RawSample> train_samples, test_samples;
  std::vector<double> train_t, test_t;
  draw_cohort(config.n_train, train_samples, train_t);
  draw_cohort(config.n_test, test_samples, test_t);

  SynthResult result;
  result.coeff_scale = scale;

  std::vector<double> obs_time = train_t;
  std::vector<std::uint8_t> obs_event(train_t.size(), 1);
  if (config.target_censoring > 0.0) {
    result.tau = calibrate_tau(train_t, config.target_censoring);
    for (std::size_t i = 0; i < train_t.size(); ++i) {
      const double c = result.tau * rng.uniform_open();
      if (c < train_t[i]) {
        obs_time[i] = c;
        obs_event[i] = 0;
      }
    }
  }
  std::size_t censored = 0;
  for (auto e : obs_event) censored += e ? 0 : 1;
  result.realized_censoring =
      static_cast<double>(censored) / static_cast<double>(obs_event.size());

  result.train = to_dataset(train_samples, obs_time, obs_event);
  result.test = to_dataset(test_samples, test_t,
                           std::vector<std::uint8_t>(test_t.size(), 1));
  return result;
}

}  // namespace ssvm
