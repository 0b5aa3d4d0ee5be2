// Command-line frontend: data generation, training, prediction, evaluation,
// model selection, benchmarking, and the synthetic comparison experiment.

#include "ssvm/data.hpp"
#include "ssvm/counts.hpp"
#include "ssvm/kernels.hpp"
#include "ssvm/metrics.hpp"
#include "ssvm/model.hpp"
#include "ssvm/objective.hpp"
#include "ssvm/rng.hpp"
#include "ssvm/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace {

using nlohmann::json;
using namespace ssvm;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

double parse_grid_value(const std::string& tok) {
  if (const auto caret = tok.find('^'); caret != std::string::npos) {
    const double base = std::stod(tok.substr(0, caret));
    const double exp = std::stod(tok.substr(caret + 1));
    return std::pow(base, exp);
  }
  return std::stod(tok);
}

// "2^-12..2^12:step2^2" (multiplicative step) or a comma list of values
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> grid;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const auto colon = s.find(":step");
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--grid", "range syntax needs ':step'");
    }
    const double lo = parse_grid_value(s.substr(0, dots));
    const double hi = parse_grid_value(s.substr(dots + 2, colon - dots - 2));
    const double step = parse_grid_value(s.substr(colon + 5));
    if (!(lo > 0) || !(hi >= lo) || !(step > 1)) {
      throw CLI::ValidationError("--grid", "need 0 < lo <= hi and step > 1");
    }
    for (double g = lo; g <= hi * (1 + 1e-12); g *= step) grid.push_back(g);
    return grid;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) grid.push_back(parse_grid_value(tok));
  if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
  return grid;
}

std::vector<FeatureSpec> schema_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("schema") ? j.at("schema") : j;
  std::vector<FeatureSpec> schema;
  for (const auto& e : arr) {
    FeatureSpec s;
    s.name = e.at("name").get<std::string>();
    const auto kind = e.at("kind").get<std::string>();
    if (kind == "categorical") {
      s.kind = FeatureKind::categorical;
      s.levels = e.at("levels").get<std::vector<std::string>>();
    } else if (kind == "continuous") {
      s.kind = FeatureKind::continuous;
    } else {
      throw std::runtime_error("schema: unknown kind '" + kind + "'");
    }
    schema.push_back(std::move(s));
  }
  return schema;
}

json schema_to_json(const std::vector<FeatureSpec>& schema) {
  json arr = json::array();
  for (const auto& s : schema) {
    json e{{"name", s.name},
           {"kind", s.kind == FeatureKind::categorical ? "categorical"
                                                       : "continuous"}};
    if (s.kind == FeatureKind::categorical) e["levels"] = s.levels;
    arr.push_back(std::move(e));
  }
  return arr;
}

// schema file if given, otherwise every feature column is continuous
SurvivalDataset load_dataset(const std::string& path,
                             const std::string& schema_path,
                             const std::string& time_col,
                             const std::string& event_col) {
  std::vector<FeatureSpec> schema;
  if (!schema_path.empty()) {
    std::ifstream in(schema_path);
    if (!in) throw std::runtime_error("cannot open schema '" + schema_path + "'");
    json j;
    in >> j;
    schema = schema_from_json(j);
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (col != time_col && col != event_col) {
        schema.push_back({col, FeatureKind::continuous, {}, 0, 0, false});
      }
    }
  }
  return load_csv(path, schema, time_col, event_col);
}

KernelConfig kernel_from_name(const std::string& name) {
  KernelConfig cfg;
  if (name == "linear") {
    cfg.kind = KernelKind::linear;
  } else if (name == "rbf") {
    cfg.kind = KernelKind::rbf;  // sigma resolved by the median heuristic
  } else if (name == "clinical") {
    cfg.kind = KernelKind::clinical;
  } else {
    throw std::runtime_error("unknown kernel '" + name + "'");
  }
  return cfg;
}

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

double median_time_ms(const std::function<void()>& fn, int runs = 5) {
  std::vector<double> times;
  for (int r = 0; r < runs; ++r) times.push_back(time_ms(fn));
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

// pre-parsed --config JSON: flat {"flag": value} sections per subcommand
void apply_config_defaults(CLI::App* sub, const json& cfg) {
  if (!cfg.contains(sub->get_name())) return;
  for (const auto& [key, value] : cfg.at(sub->get_name()).items()) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw std::runtime_error("config: unknown option '" + key +
                               "' for subcommand '" + sub->get_name() + "'");
    }
    opt->run_callback_for_default();
    opt->default_val(value.is_string() ? value.get<std::string>()
                                       : value.dump());
    opt->required(false);  // the config value satisfies the requirement
  }
}

struct TrainArgs {
  std::string data, schema, time_col = "time", event_col = "event";
  std::string kernel = "linear", pairs = "full", out_model;
  double gamma = 1.0;
  int max_newton = 200;
  bool verbose = false;
};

int run_train(const TrainArgs& a) {
  const auto d = load_dataset(a.data, a.schema, a.time_col, a.event_col);
  OptimizerOptions opts;
  opts.max_newton = a.max_newton;
  if (a.verbose) {
    opts.on_iteration = [](int it, double obj, double gnorm, int cg,
                           double step) {
      std::cerr << "iter " << it << "  obj " << obj << "  |g| " << gnorm
                << "  cg " << cg << "  step " << step << '\n';
    };
  }
  const auto mode = a.pairs == "reduced" ? PairMode::reduced : PairMode::full;
  const auto m = fit(d, kernel_from_name(a.kernel), a.gamma, opts, mode);
  if (!a.out_model.empty()) save_model(m, a.out_model);
  std::cerr << "trained n=" << d.n() << " kernel=" << a.kernel
            << " gamma=" << a.gamma << " iterations="
            << m.report.iterations.size() << " termination="
            << to_string(m.report.reason) << '\n';
  return m.report.reason == TerminationReason::gradient_tol
             ? kExitOk
             : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* threads = std::getenv("SSVM_THREADS")) {
    omp_set_num_threads(std::max(1, std::atoi(threads)));
  }
#endif

  CLI::App app{"Kernel survival support vector machine"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON file with per-subcommand option defaults");

  // ---- synth-gen ----
  auto* gen = app.add_subcommand("synth-gen",
                                 "Generate Bender-style synthetic data");
  SynthConfig synth_cfg;
  std::string out_dir = ".";
  double censoring = 0.2;
  gen->add_option("--n-train", synth_cfg.n_train, "Training rows");
  gen->add_option("--n-test", synth_cfg.n_test, "Test rows");
  gen->add_option("--seed", synth_cfg.seed, "RNG seed");
  gen->add_option("--censoring", censoring, "Target censored fraction");
  gen->add_option("--out-dir", out_dir, "Output directory")->required();

  // ---- train ----
  auto* train = app.add_subcommand("train", "Fit a survival SVM");
  TrainArgs ta;
  train->add_option("--data", ta.data, "Training CSV")->required();
  train->add_option("--schema", ta.schema, "Feature schema JSON");
  train->add_option("--time-col", ta.time_col, "Time column name");
  train->add_option("--event-col", ta.event_col, "Event column name");
  train->add_option("--kernel", ta.kernel, "linear|rbf|clinical")
      ->check(CLI::IsMember({"linear", "rbf", "clinical"}));
  train->add_option("--gamma", ta.gamma, "Regularization trade-off")
      ->check(CLI::PositiveNumber);
  train->add_option("--pairs", ta.pairs, "full|reduced")
      ->check(CLI::IsMember({"full", "reduced"}));
  train->add_option("--max-newton", ta.max_newton, "Newton iteration cap");
  train->add_option("--out-model", ta.out_model, "Model file to write");
  train->add_flag("--verbose", ta.verbose, "Per-iteration log on stderr");

  // ---- grid-search ----
  auto* gs = app.add_subcommand("grid-search", "Select gamma by CV splits");
  std::string gs_data, gs_schema, gs_kernel = "linear";
  std::string gs_time = "time", gs_event = "event";
  std::string gs_grid = "2^-12..2^12:step2^2";
  int gs_splits = 10, gs_max_newton = 200;
  std::uint64_t gs_seed = 0;
  gs->add_option("--data", gs_data, "Training CSV")->required();
  gs->add_option("--schema", gs_schema, "Feature schema JSON");
  gs->add_option("--time-col", gs_time, "Time column name");
  gs->add_option("--event-col", gs_event, "Event column name");
  gs->add_option("--kernel", gs_kernel, "linear|rbf|clinical")
      ->check(CLI::IsMember({"linear", "rbf", "clinical"}));
  gs->add_option("--grid", gs_grid, "Range '2^-12..2^12:step2^2' or list");
  gs->add_option("--splits", gs_splits, "Random 80/20 splits");
  gs->add_option("--max-newton", gs_max_newton, "Newton iteration cap");
  gs->add_option("--seed", gs_seed, "Split RNG seed");

  // ---- predict ----
  auto* pred = app.add_subcommand("predict", "Score new data with a model");
  std::string pr_model, pr_data, pr_schema, pr_out;
  std::string pr_time = "time", pr_event = "event";
  pred->add_option("--model", pr_model, "Model file")->required();
  pred->add_option("--data", pr_data, "Input CSV")->required();
  pred->add_option("--schema", pr_schema, "Feature schema JSON");
  pred->add_option("--time-col", pr_time, "Time column name");
  pred->add_option("--event-col", pr_event, "Event column name");
  pred->add_option("--out", pr_out, "Scores CSV (default stdout)");

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "Harrell's c on labelled data");
  std::string ev_model, ev_data, ev_schema;
  std::string ev_time = "time", ev_event = "event";
  eval->add_option("--model", ev_model, "Model file")->required();
  eval->add_option("--data", ev_data, "Labelled CSV")->required();
  eval->add_option("--schema", ev_schema, "Feature schema JSON");
  eval->add_option("--time-col", ev_time, "Time column name");
  eval->add_option("--event-col", ev_event, "Event column name");

  // ---- benchmark ----
  auto* bench = app.add_subcommand(
      "benchmark", "Fast vs naive counting, hessvec breakdown, gram scaling");
  std::string bench_sizes = "500,1000,2000,4000";
  std::uint64_t bench_seed = 0;
  bench->add_option("--sizes", bench_sizes, "Comma list of n");
  bench->add_option("--seed", bench_seed, "RNG seed");

  // ---- experiment ----
  auto* exp = app.add_subcommand(
      "experiment", "Synthetic kernel/pair-mode comparison (plot-ready CSV)");
  int exp_replicates = 10;
  Eigen::Index exp_n = 1500;
  std::string exp_kernels = "linear,rbf,clinical";
  std::uint64_t exp_seed = 0;
  double exp_gamma = 1.0;
  double exp_coeff_scale = std::numeric_limits<double>::quiet_NaN();
  int exp_max_newton = 200;
  exp->add_option("--replicates", exp_replicates, "Replicate count");
  exp->add_option("--n", exp_n, "Training rows per replicate");
  exp->add_option("--kernels", exp_kernels, "Comma list of kernels");
  exp->add_option("--seed", exp_seed, "Base RNG seed");
  exp->add_option("--gamma", exp_gamma, "Fixed regularization trade-off")
      ->check(CLI::PositiveNumber);
  exp->add_option("--coeff-scale", exp_coeff_scale,
                  "Fixed risk-coefficient scale (default: drawn per replicate)");
  exp->add_option("--max-newton", exp_max_newton, "Newton iteration cap");

  // apply config-file defaults before parsing the command line
  try {
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config '" + config_path + "'");
      json cfg;
      in >> cfg;
      for (auto* sub : app.get_subcommands({})) {
        apply_config_defaults(sub, cfg);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      synth_cfg.target_censoring = censoring;
      const auto r = generate(synth_cfg);
      namespace fs = std::filesystem;
      fs::create_directories(out_dir);
      save_csv((fs::path(out_dir) / "train.csv").string(), r.train);
      save_csv((fs::path(out_dir) / "test.csv").string(), r.test);
      const json meta{{"n_train", synth_cfg.n_train},
                      {"n_test", synth_cfg.n_test},
                      {"seed", synth_cfg.seed},
                      {"target_censoring", censoring},
                      {"weibull_k", synth_cfg.weibull_k},
                      {"weibull_lambda", synth_cfg.weibull_lambda},
                      {"coeff_scale", r.coeff_scale},
                      {"tau", r.tau},
                      {"realized_censoring", r.realized_censoring},
                      {"schema", schema_to_json(r.train.specs)}};
      std::ofstream meta_out(fs::path(out_dir) / "meta.json");
      meta_out << meta.dump(2) << '\n';
      std::cerr << "wrote train.csv/test.csv/meta.json to " << out_dir
                << " (censoring " << r.realized_censoring << ")\n";
      return kExitOk;
    }

    if (*train) return run_train(ta);

    if (*gs) {
      const auto d = load_dataset(gs_data, gs_schema, gs_time, gs_event);
      OptimizerOptions opts;
      opts.max_newton = gs_max_newton;
      const auto grid = parse_grid(gs_grid);
      const auto r = grid_search(d, kernel_from_name(gs_kernel), grid, opts,
                                 gs_splits, 0.8, gs_seed);
      std::cout << "gamma,mean_cindex\n";
      std::cout.precision(17);
      for (std::size_t i = 0; i < r.grid.size(); ++i) {
        std::cout << r.grid[i] << ',' << r.mean_cindex[i] << '\n';
      }
      std::cout << "best," << r.best_gamma << '\n';
      std::cerr << "best gamma: " << r.best_gamma << '\n';
      return kExitOk;
    }

    if (*pred || *eval) {
      const bool is_pred = static_cast<bool>(*pred);
      const auto m = load_model(is_pred ? pr_model : ev_model);
      const auto d = load_dataset(is_pred ? pr_data : ev_data,
                                  is_pred ? pr_schema : ev_schema,
                                  is_pred ? pr_time : ev_time,
                                  is_pred ? pr_event : ev_event);
      const Eigen::VectorXd scores = predict(m, d.X);
      if (is_pred) {
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!pr_out.empty()) {
          file.open(pr_out);
          if (!file) throw std::runtime_error("cannot write '" + pr_out + "'");
          out = &file;
        }
        out->precision(17);
        *out << "row,score\n";
        for (Eigen::Index i = 0; i < scores.size(); ++i) {
          *out << i << ',' << scores[i] << '\n';
        }
      } else {
        const auto c = harrell_c(d.y, d.delta, scores);
        std::cout.precision(17);
        std::cout << "cindex,concordant,discordant,tied_score,comparable\n"
                  << c.cindex << ',' << c.concordant << ',' << c.discordant
                  << ',' << c.tied_score << ',' << c.comparable << '\n';
      }
      return kExitOk;
    }

    if (*bench) {
      std::vector<Eigen::Index> sizes;
      {
        std::stringstream ss(bench_sizes);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stol(tok));
      }
      std::cout << "stage,n,milliseconds\n";
      std::cout.precision(6);
      Rng rng(bench_seed);
      for (const auto n : sizes) {
        Eigen::VectorXd y(n), f(n), v(n);
        std::vector<std::uint8_t> delta(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
          y[i] = rng.uniform_open();
          delta[static_cast<std::size_t>(i)] = rng.bernoulli(0.8) ? 1 : 0;
          f[i] = rng.normal();
          v[i] = rng.normal();
        }
        const double fast = median_time_ms(
            [&] { (void)survival_counts(y, delta, f, v); });
        const double naive = median_time_ms(
            [&] { (void)naive_survival_counts(y, delta, f, v); });
        std::cout << "counting_fast," << n << ',' << fast << '\n';
        std::cout << "counting_naive," << n << ',' << naive << '\n';
      }
      {
        // hessvec cost split at the largest size <= 4000
        Eigen::Index n = 0;
        for (const auto s : sizes) {
          if (s <= 4000) n = std::max(n, s);
        }
        if (n >= 2) {
          Eigen::MatrixXd X(n, 10);
          Eigen::VectorXd y(n), beta(n), v(n);
          std::vector<std::uint8_t> delta(static_cast<std::size_t>(n));
          for (Eigen::Index i = 0; i < n; ++i) {
            for (int j = 0; j < 10; ++j) X(i, j) = rng.normal();
            y[i] = rng.uniform_open();
            delta[static_cast<std::size_t>(i)] = rng.bernoulli(0.8) ? 1 : 0;
            beta[i] = 0.01 * rng.normal();
            v[i] = rng.normal();
          }
          const auto K = gram(KernelConfig::rbf(3.0), X).K;
          const ObjectiveContext ctx{K, y, delta, 1.0};
          const Eigen::VectorXd fscore = symv(K, beta);
          const double total = median_time_ms(
              [&] { (void)hessvec(ctx, fscore, v); });
          const double kv = median_time_ms([&] { (void)symv(K, v); });
          // hessvec performs two K*v products plus the counting sweep
          std::cout << "hessvec_total," << n << ',' << total << '\n';
          std::cout << "hessvec_kv_share," << n << ',' << 2.0 * kv << '\n';

          const double g_par = median_time_ms(
              [&] { (void)gram(KernelConfig::rbf(3.0), X); }, 3);
          const double g_ser = median_time_ms(
              [&] { (void)gram_serial(KernelConfig::rbf(3.0), X); }, 3);
          std::cout << "gram_parallel," << n << ',' << g_par << '\n';
          std::cout << "gram_serial," << n << ',' << g_ser << '\n';
        }
      }
      return kExitOk;
    }

    if (*exp) {
      std::vector<std::string> kernels;
      {
        std::stringstream ss(exp_kernels);
        std::string tok;
        while (std::getline(ss, tok, ',')) kernels.push_back(tok);
      }
      OptimizerOptions opts;
      opts.max_newton = exp_max_newton;
      struct Cell {
        std::string kernel;
        PairMode mode;
      };
      std::vector<Cell> cells;
      for (const auto& k : kernels) {
        cells.push_back({k, PairMode::full});
        cells.push_back({k, PairMode::reduced});
      }
      std::vector<std::vector<double>> scores(
          cells.size(), std::vector<double>(
                            static_cast<std::size_t>(exp_replicates), 0.0));
#pragma omp parallel for schedule(dynamic)
      for (int rep = 0; rep < exp_replicates; ++rep) {
        SynthConfig cfg;
        cfg.n_train = exp_n;
        cfg.n_test = exp_n;
        cfg.seed = exp_seed + static_cast<std::uint64_t>(rep);
        if (!std::isnan(exp_coeff_scale)) cfg.coeff_scale = exp_coeff_scale;
        const auto data = generate(cfg);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          const auto m = fit(data.train, kernel_from_name(cells[c].kernel),
                             exp_gamma, opts, cells[c].mode);
          const auto scoresv = predict(m, data.test.X);
          scores[c][static_cast<std::size_t>(rep)] =
              harrell_c(data.test.y, data.test.delta, scoresv).cindex;
        }
      }
      std::cout << "kernel,pair_mode,mean_cindex,stddev_cindex,replicates\n";
      std::cout.precision(17);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        double mean = 0.0;
        for (double s : scores[c]) mean += s;
        mean /= static_cast<double>(scores[c].size());
        double var = 0.0;
        for (double s : scores[c]) var += (s - mean) * (s - mean);
        var /= static_cast<double>(scores[c].size());
        std::cout << cells[c].kernel << ','
                  << (cells[c].mode == PairMode::full ? "full" : "reduced")
                  << ',' << mean << ',' << std::sqrt(var) << ','
                  << exp_replicates << '\n';
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
