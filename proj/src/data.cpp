#include "ssvm/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ssvm {

void SurvivalDataset::validate() const {
  const Eigen::Index rows = X.rows();
  if (y.size() != rows || static_cast<Eigen::Index>(delta.size()) != rows) {
    throw std::invalid_argument("dataset: X, y, delta lengths disagree");
  }
  if (static_cast<Eigen::Index>(specs.size()) != X.cols()) {
    throw std::invalid_argument("dataset: spec count does not match columns");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!(y[i] > 0.0)) {
      throw std::invalid_argument("dataset: non-positive time in row " +
                                  std::to_string(i + 1));
    }
  }
  for (const auto& s : specs) {
    if (s.kind == FeatureKind::categorical && s.levels.empty()) {
      throw std::invalid_argument("dataset: categorical spec '" + s.name +
                                  "' has no levels");
    }
    if (s.kind == FeatureKind::continuous && s.has_range &&
        s.range_min > s.range_max) {
      throw std::invalid_argument("dataset: spec '" + s.name +
                                  "' has min > max");
    }
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& what,
                    std::size_t row) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("csv: cannot parse " + what + " value '" + s +
                             "' in data row " + std::to_string(row));
  }
}

}  // namespace

SurvivalDataset load_csv(const std::string& path,
                         const std::vector<FeatureSpec>& schema,
                         const std::string& time_column,
                         const std::string& event_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);

  auto column_of = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw std::runtime_error("csv: missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t time_col = column_of(time_column);
  const std::size_t event_col = column_of(event_column);
  std::vector<std::size_t> feat_cols;
  feat_cols.reserve(schema.size());
  for (const auto& s : schema) feat_cols.push_back(column_of(s.name));

  std::vector<std::unordered_map<std::string, double>> level_index(
      schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].kind != FeatureKind::categorical) continue;
    for (std::size_t l = 0; l < schema[c].levels.size(); ++l) {
      level_index[c][schema[c].levels[l]] = static_cast<double>(l);
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> times;
  std::vector<std::uint8_t> events;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_no;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("csv: data row " + std::to_string(row_no) +
                               " has " + std::to_string(fields.size()) +
                               " fields, header has " +
                               std::to_string(header.size()));
    }
    const double t = parse_number(fields[time_col], "time", row_no);
    if (!(t > 0.0)) {
      throw std::runtime_error("csv: non-positive time in data row " +
                               std::to_string(row_no));
    }
    const std::string& ev = fields[event_col];
    if (ev != "0" && ev != "1") {
      throw std::runtime_error("csv: event value '" + ev + "' in data row " +
                               std::to_string(row_no) + " is not 0 or 1");
    }
    std::vector<double> feat(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const std::string& cell = fields[feat_cols[c]];
      if (cell.empty()) {
        throw std::runtime_error("csv: missing value in data row " +
                                 std::to_string(row_no) + ", column '" +
                                 schema[c].name + "'");
      }
      if (schema[c].kind == FeatureKind::categorical) {
        const auto it = level_index[c].find(cell);
        if (it == level_index[c].end()) {
          throw std::runtime_error("csv: unknown level '" + cell +
                                   "' for column '" + schema[c].name +
                                   "' in data row " + std::to_string(row_no));
        }
        feat[c] = it->second;
      } else {
        feat[c] = parse_number(cell, "'" + schema[c].name + "'", row_no);
      }
    }
    rows.push_back(std::move(feat));
    times.push_back(t);
    events.push_back(ev == "1" ? 1 : 0);
  }

  SurvivalDataset d;
  d.specs = schema;
  d.X.resize(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(schema.size()));
  d.y.resize(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          rows[i][c];
    }
    d.y[static_cast<Eigen::Index>(i)] = times[i];
  }
  d.delta = std::move(events);
  d.validate();
  return d;
}

void save_csv(const std::string& path, const SurvivalDataset& d,
              const std::string& time_column,
              const std::string& event_column) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
  out << std::setprecision(17);
  for (const auto& s : d.specs) out << s.name << ',';
  out << time_column << ',' << event_column << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index c = 0; c < d.p(); ++c) {
      const auto& s = d.specs[static_cast<std::size_t>(c)];
      if (s.kind == FeatureKind::categorical) {
        out << s.levels[static_cast<std::size_t>(d.X(i, c))];
      } else {
        out << d.X(i, c);
      }
      out << ',';
    }
    out << d.y[i] << ',' << (d.delta[static_cast<std::size_t>(i)] ? 1 : 0)
        << '\n';
  }
}

std::pair<SurvivalDataset, StandardizationStats> standardize(
    const SurvivalDataset& d) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  StandardizationStats stats;
  stats.mean = Eigen::VectorXd::Zero(p);
  stats.stddev = Eigen::VectorXd::Ones(p);
  stats.scaled.assign(static_cast<std::size_t>(p), 0);
  stats.constant.assign(static_cast<std::size_t>(p), 0);

  SurvivalDataset out = d;
  for (Eigen::Index c = 0; c < p; ++c) {
    if (d.specs[static_cast<std::size_t>(c)].kind != FeatureKind::continuous) {
      continue;
    }
    const double mean = d.X.col(c).mean();
    const double var =
        (d.X.col(c).array() - mean).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      stats.mean[c] = mean;
      stats.stddev[c] = sd;
      stats.scaled[static_cast<std::size_t>(c)] = 1;
      out.X.col(c) = (d.X.col(c).array() - mean) / sd;
    } else {
      stats.constant[static_cast<std::size_t>(c)] = 1;
    }
  }
  return {std::move(out), std::move(stats)};
}

Eigen::MatrixXd apply_standardization(const StandardizationStats& stats,
                                      const Eigen::MatrixXd& X) {
  if (X.cols() != stats.mean.size()) {
    throw std::invalid_argument("apply_standardization: column count " +
                                std::to_string(X.cols()) +
                                " does not match stats (" +
                                std::to_string(stats.mean.size()) + ")");
  }
  Eigen::MatrixXd out = X;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    if (stats.scaled[static_cast<std::size_t>(c)]) {
      out.col(c) = (X.col(c).array() - stats.mean[c]) / stats.stddev[c];
    }
  }
  return out;
}

Eigen::MatrixXd dummy_encode(const Eigen::MatrixXd& X,
                             const std::vector<FeatureSpec>& specs) {
  if (X.cols() != static_cast<Eigen::Index>(specs.size())) {
    throw std::invalid_argument("dummy_encode: column/spec count mismatch");
  }
  Eigen::Index out_cols = 0;
  for (const auto& s : specs) {
    out_cols += s.kind == FeatureKind::categorical
                    ? static_cast<Eigen::Index>(s.levels.size())
                    : 1;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), out_cols);
  Eigen::Index oc = 0;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const auto& s = specs[static_cast<std::size_t>(c)];
    if (s.kind == FeatureKind::categorical) {
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const auto level = static_cast<Eigen::Index>(X(i, c));
        if (level < 0 || level >= static_cast<Eigen::Index>(s.levels.size())) {
          throw std::invalid_argument("dummy_encode: level index out of range "
                                      "for column '" + s.name + "'");
        }
        out(i, oc + level) = 1.0;
      }
      oc += static_cast<Eigen::Index>(s.levels.size());
    } else {
      out.col(oc++) = X.col(c);
    }
  }
  return out;
}

std::vector<FeatureSpec> fill_ranges(const std::vector<FeatureSpec>& specs,
                                     const Eigen::MatrixXd& X) {
  if (X.cols() != static_cast<Eigen::Index>(specs.size())) {
    throw std::invalid_argument("fill_ranges: column/spec count mismatch");
  }
  std::vector<FeatureSpec> out = specs;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    auto& s = out[static_cast<std::size_t>(c)];
    if (s.kind != FeatureKind::continuous) continue;
    s.range_min = X.col(c).minCoeff();
    s.range_max = X.col(c).maxCoeff();
    s.has_range = true;
  }
  return out;
}

}  // namespace ssvm
