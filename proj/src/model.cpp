#include "ssvm/model.hpp"

#include "ssvm/metrics.hpp"
#include "ssvm/objective.hpp"
#include "ssvm/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ssvm {

namespace {

// Fast path: counting-sweep objective over the full comparable-pair set.
class FastSsvmProblem final : public ObjectiveProblem {
 public:
  FastSsvmProblem(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                  const std::vector<std::uint8_t>& delta, double gamma)
      : ctx_{K, y, delta, gamma} {}

  Eigen::Index dim() const override { return ctx_.K.rows(); }

  double value(const Eigen::VectorXd& beta) const override {
    return objective(ctx_, beta);
  }

  double value_and_gradient(const Eigen::VectorXd& beta,
                            Eigen::VectorXd& grad) const override {
    double v;
    objective_and_gradient(ctx_, beta, v, grad);
    return v;
  }

  void prepare(const Eigen::VectorXd& beta) override {
    f_ = symv(ctx_.K, beta);
  }

  Eigen::VectorXd hessian_vector(const Eigen::VectorXd& v) const override {
    return hessvec(ctx_, f_, v);
  }

 private:
  ObjectiveContext ctx_;
  Eigen::VectorXd f_;
};

// Naive path over an explicit pair list; serves the reduced-pair baseline.
class PairListProblem final : public ObjectiveProblem {
 public:
  PairListProblem(const Eigen::MatrixXd& K, PairList pairs, double gamma)
      : K_(K), pairs_(std::move(pairs)), gamma_(gamma) {}

  Eigen::Index dim() const override { return K_.rows(); }

  double value(const Eigen::VectorXd& beta) const override {
    return naive_objective(K_, pairs_, beta, gamma_);
  }

  double value_and_gradient(const Eigen::VectorXd& beta,
                            Eigen::VectorXd& grad) const override {
    grad = naive_gradient(K_, pairs_, beta, gamma_);
    return naive_objective(K_, pairs_, beta, gamma_);
  }

  void prepare(const Eigen::VectorXd& beta) override { beta_ = beta; }

  Eigen::VectorXd hessian_vector(const Eigen::VectorXd& v) const override {
    return naive_hessvec(K_, pairs_, beta_, gamma_, v);
  }

 private:
  const Eigen::MatrixXd& K_;
  PairList pairs_;
  double gamma_;
  Eigen::VectorXd beta_;
};

struct Preprocessed {
  Eigen::MatrixXd X;
  StandardizationStats stats;
  KernelConfig kernel;
};

Preprocessed preprocess(const SurvivalDataset& d, const KernelConfig& kernel) {
  Preprocessed out;
  auto [std_ds, stats] = standardize(d);
  out.stats = std::move(stats);
  out.kernel = kernel;
  if (kernel.kind == KernelKind::clinical) {
    out.X = std_ds.X;
    out.kernel.specs = fill_ranges(d.specs, out.X);
  } else {
    out.X = dummy_encode(std_ds.X, d.specs);
    if (kernel.kind == KernelKind::rbf && !(kernel.sigma > 0.0)) {
      out.kernel.sigma = median_pairwise_distance(out.X);
    }
  }
  return out;
}

Eigen::MatrixXd transform_new(const TrainedModel& m,
                              const Eigen::MatrixXd& X_new) {
  if (X_new.cols() != static_cast<Eigen::Index>(m.specs.size())) {
    throw std::invalid_argument("predict: feature count mismatch");
  }
  const Eigen::MatrixXd std_X = apply_standardization(m.stats, X_new);
  if (m.kernel.kind == KernelKind::clinical) return std_X;
  return dummy_encode(std_X, m.specs);
}

}  // namespace

TrainedModel fit(const SurvivalDataset& d, const KernelConfig& kernel,
                 double gamma, const OptimizerOptions& opts,
                 PairMode pair_mode) {
  d.validate();
  if (!(gamma > 0.0)) throw std::invalid_argument("fit: gamma must be > 0");
  if (d.n() < 2) throw std::invalid_argument("fit: need at least 2 samples");
  if (d.num_events() < 1) {
    throw std::runtime_error("fit: no uncensored samples, P is empty");
  }
  if (count_comparable_pairs(d.y, d.delta) == 0) {
    throw std::runtime_error("fit: no comparable pairs");
  }

  TrainedModel m;
  Preprocessed pre = preprocess(d, kernel);
  m.stats = std::move(pre.stats);
  m.kernel = std::move(pre.kernel);
  m.X_train = std::move(pre.X);
  m.specs = d.specs;
  m.gamma = gamma;
  m.pair_mode = pair_mode;

  const GramMatrix g = gram(m.kernel, m.X_train);
  const Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(d.n());
  if (pair_mode == PairMode::full) {
    FastSsvmProblem problem(g.K, d.y, d.delta, gamma);
    auto [beta, report] = minimize(problem, beta0, opts);
    m.beta = std::move(beta);
    m.report = std::move(report);
  } else {
    PairListProblem problem(g.K, reduced_pairs(d.y, d.delta), gamma);
    auto [beta, report] = minimize(problem, beta0, opts);
    m.beta = std::move(beta);
    m.report = std::move(report);
  }
  return m;
}

Eigen::VectorXd predict(const TrainedModel& m, const Eigen::MatrixXd& X_new) {
  const Eigen::MatrixXd X = transform_new(m, X_new);
  const Eigen::MatrixXd K = cross_gram(m.kernel, m.X_train, X);
  // training rewards higher f for longer survival; negate so that higher
  // returned scores mean higher risk
  return -(K * m.beta);
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int e = -12; e <= 12; e += 2) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

namespace {

SurvivalDataset subset(const SurvivalDataset& d,
                       const std::vector<Eigen::Index>& rows) {
  SurvivalDataset out;
  out.specs = d.specs;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), d.p());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  out.delta.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = d.X.row(rows[i]);
    out.y[static_cast<Eigen::Index>(i)] = d.y[rows[i]];
    out.delta[i] = d.delta[static_cast<std::size_t>(rows[i])];
  }
  return out;
}

}  // namespace

GridSearchResult grid_search(const SurvivalDataset& d,
                             const KernelConfig& kernel,
                             const std::vector<double>& grid,
                             const OptimizerOptions& opts, int n_splits,
                             double train_frac, std::uint64_t seed,
                             PairMode pair_mode) {
  if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  if (n_splits < 1) throw std::invalid_argument("grid_search: n_splits < 1");
  const Eigen::Index n = d.n();
  const auto n_train =
      static_cast<Eigen::Index>(std::llround(train_frac * n));
  if (n_train < 2 || n_train >= n) {
    throw std::invalid_argument("grid_search: degenerate split size");
  }

  // fix the splits up front so every gamma sees the same partitions
  std::vector<std::pair<SurvivalDataset, SurvivalDataset>> splits;
  for (int s = 0; s < n_splits; ++s) {
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1));
    bool found = false;
    for (int attempt = 0; attempt < 100 && !found; ++attempt) {
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
      for (std::size_t i = idx.size() - 1; i > 0; --i) {
        std::swap(idx[i], idx[rng.below(i + 1)]);
      }
      std::vector<Eigen::Index> tr(idx.begin(), idx.begin() + n_train);
      std::vector<Eigen::Index> va(idx.begin() + n_train, idx.end());
      SurvivalDataset train = subset(d, tr);
      SurvivalDataset val = subset(d, va);
      if (train.num_events() >= 1 &&
          count_comparable_pairs(train.y, train.delta) > 0 &&
          count_comparable_pairs(val.y, val.delta) > 0) {
        splits.emplace_back(std::move(train), std::move(val));
        found = true;
      }
    }
    if (!found) {
      throw std::runtime_error(
          "grid_search: could not draw a valid split after 100 attempts");
    }
  }

  GridSearchResult result;
  result.grid = grid;
  result.mean_cindex.assign(grid.size(), 0.0);

  std::vector<double> scores(grid.size() * static_cast<std::size_t>(n_splits));
  const auto cells = static_cast<std::int64_t>(scores.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const std::size_t gi = static_cast<std::size_t>(cell) /
                           static_cast<std::size_t>(n_splits);
    const std::size_t si = static_cast<std::size_t>(cell) %
                           static_cast<std::size_t>(n_splits);
    const auto& [train, val] = splits[si];
    const TrainedModel m = fit(train, kernel, grid[gi], opts, pair_mode);
    const Eigen::VectorXd pred = predict(m, val.X);
    scores[static_cast<std::size_t>(cell)] =
        harrell_c(val.y, val.delta, pred).cindex;
  }

  std::size_t best = 0;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    double mean = 0.0;
    for (int si = 0; si < n_splits; ++si) {
      mean += scores[gi * static_cast<std::size_t>(n_splits) +
                     static_cast<std::size_t>(si)];
    }
    mean /= static_cast<double>(n_splits);
    result.mean_cindex[gi] = mean;
    // strict > keeps the smallest gamma on ties
    if (result.mean_cindex[gi] > result.mean_cindex[best]) best = gi;
  }
  result.best_gamma = grid[best];
  return result;
}

// -- Serialization -----------------------------------------------------------

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json spec_to_json(const FeatureSpec& s) {
  return json{{"name", s.name},
              {"kind", s.kind == FeatureKind::categorical ? "categorical"
                                                          : "continuous"},
              {"levels", s.levels},
              {"range_min", s.range_min},
              {"range_max", s.range_max},
              {"has_range", s.has_range}};
}

FeatureSpec spec_from_json(const json& j) {
  FeatureSpec s;
  s.name = j.at("name").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "categorical") {
    s.kind = FeatureKind::categorical;
  } else if (kind == "continuous") {
    s.kind = FeatureKind::continuous;
  } else {
    throw std::runtime_error("model file: unknown feature kind '" + kind +
                             "'");
  }
  s.levels = j.at("levels").get<std::vector<std::string>>();
  s.range_min = j.at("range_min").get<double>();
  s.range_max = j.at("range_max").get<double>();
  s.has_range = j.at("has_range").get<bool>();
  return s;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols =
      rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : Eigen::Index{0};
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::runtime_error("model file: ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

std::string kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::linear:
      return "linear";
    case KernelKind::rbf:
      return "rbf";
    case KernelKind::clinical:
      return "clinical";
  }
  return "unknown";
}

}  // namespace

void save_model(const TrainedModel& m, const std::string& path) {
  json specs = json::array();
  for (const auto& s : m.specs) specs.push_back(spec_to_json(s));
  json kspecs = json::array();
  for (const auto& s : m.kernel.specs) kspecs.push_back(spec_to_json(s));

  const json j{
      {"schema_version", kSchemaVersion},
      {"kernel",
       {{"kind", kernel_kind_name(m.kernel.kind)},
        {"sigma", m.kernel.sigma},
        {"ridge", m.kernel.ridge},
        {"specs", kspecs}}},
      {"gamma", m.gamma},
      {"pair_mode", m.pair_mode == PairMode::full ? "full" : "reduced"},
      {"stats",
       {{"mean", std::vector<double>(m.stats.mean.data(),
                                     m.stats.mean.data() + m.stats.mean.size())},
        {"stddev",
         std::vector<double>(m.stats.stddev.data(),
                             m.stats.stddev.data() + m.stats.stddev.size())},
        {"scaled", m.stats.scaled},
        {"constant", m.stats.constant}}},
      {"specs", specs},
      {"beta", std::vector<double>(m.beta.data(),
                                   m.beta.data() + m.beta.size())},
      {"X_train", matrix_to_json(m.X_train)},
      {"report",
       {{"reason", to_string(m.report.reason)},
        {"iterations", m.report.iterations.size()},
        {"final_objective", m.report.final_objective},
        {"final_grad_norm", m.report.final_grad_norm}}}};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("load_model: malformed file: ") +
                             e.what());
  }
  const int version = j.at("schema_version").get<int>();
  if (version != kSchemaVersion) {
    throw std::runtime_error("load_model: unsupported schema_version " +
                             std::to_string(version));
  }
  TrainedModel m;
  const auto& jk = j.at("kernel");
  const auto kind = jk.at("kind").get<std::string>();
  if (kind == "linear") {
    m.kernel.kind = KernelKind::linear;
  } else if (kind == "rbf") {
    m.kernel.kind = KernelKind::rbf;
  } else if (kind == "clinical") {
    m.kernel.kind = KernelKind::clinical;
  } else {
    throw std::runtime_error("load_model: unknown kernel kind '" + kind + "'");
  }
  m.kernel.sigma = jk.at("sigma").get<double>();
  m.kernel.ridge = jk.at("ridge").get<double>();
  for (const auto& s : jk.at("specs")) {
    m.kernel.specs.push_back(spec_from_json(s));
  }
  m.gamma = j.at("gamma").get<double>();
  m.pair_mode = j.at("pair_mode").get<std::string>() == "reduced"
                    ? PairMode::reduced
                    : PairMode::full;
  const auto& js = j.at("stats");
  const auto mean = js.at("mean").get<std::vector<double>>();
  const auto stddev = js.at("stddev").get<std::vector<double>>();
  m.stats.mean = Eigen::Map<const Eigen::VectorXd>(
      mean.data(), static_cast<Eigen::Index>(mean.size()));
  m.stats.stddev = Eigen::Map<const Eigen::VectorXd>(
      stddev.data(), static_cast<Eigen::Index>(stddev.size()));
  m.stats.scaled = js.at("scaled").get<std::vector<std::uint8_t>>();
  m.stats.constant = js.at("constant").get<std::vector<std::uint8_t>>();
  for (const auto& s : j.at("specs")) m.specs.push_back(spec_from_json(s));
  const auto beta = j.at("beta").get<std::vector<double>>();
  m.beta = Eigen::Map<const Eigen::VectorXd>(
      beta.data(), static_cast<Eigen::Index>(beta.size()));
  m.X_train = matrix_from_json(j.at("X_train"));
  if (m.beta.size() != m.X_train.rows()) {
    throw std::runtime_error("load_model: beta/X_train size mismatch");
  }
  const auto reason = j.at("report").at("reason").get<std::string>();
  if (reason == "gradient_tol") {
    m.report.reason = TerminationReason::gradient_tol;
  } else if (reason == "line_search_failure") {
    m.report.reason = TerminationReason::line_search_failure;
  } else {
    m.report.reason = TerminationReason::max_newton;
  }
  m.report.final_objective = j.at("report").at("final_objective").get<double>();
  m.report.final_grad_norm = j.at("report").at("final_grad_norm").get<double>();
  return m;
}

}  // namespace ssvm
