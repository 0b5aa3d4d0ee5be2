#include "ssvm/data.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace ssvm;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    path = std::string(std::tmpnam(nullptr)) + ".csv";
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::vector<FeatureSpec> simple_schema() {
  return {{"a", FeatureKind::continuous, {}, 0, 0, false},
          {"grade", FeatureKind::categorical, {"low", "high"}, 0, 0, false}};
}

}  // namespace

TEST_CASE("load_csv parses rows in file order") {
  TempFile f(
      "a,grade,time,event\n"
      "0.5,low,1,1\n"
      "1.5,high,2,0\n"
      "2.5,low,3,1\n");
  const auto d = load_csv(f.path, simple_schema(), "time", "event");
  REQUIRE(d.n() == 3);
  CHECK(d.y[0] == 1.0);
  CHECK(d.y[1] == 2.0);
  CHECK(d.y[2] == 3.0);
  CHECK(d.delta == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(d.X(0, 0) == 0.5);
  CHECK(d.X(1, 1) == 1.0);  // "high" -> level index 1
  CHECK(d.X(2, 1) == 0.0);
}

TEST_CASE("load_csv rejects non-positive time naming the row") {
  TempFile f("a,grade,time,event\n1,low,1,1\n2,low,0,1\n");
  CHECK_THROWS_WITH_AS(load_csv(f.path, simple_schema(), "time", "event"),
                       doctest::Contains("row 2"), std::runtime_error);
}

TEST_CASE("load_csv rejects bad event values and unknown levels") {
  TempFile f1("a,grade,time,event\n1,low,1,2\n");
  CHECK_THROWS_AS(load_csv(f1.path, simple_schema(), "time", "event"),
                  std::runtime_error);
  TempFile f2("a,grade,time,event\n1,medium,1,1\n");
  CHECK_THROWS_WITH_AS(load_csv(f2.path, simple_schema(), "time", "event"),
                       doctest::Contains("medium"), std::runtime_error);
  TempFile f3("a,grade,time\n1,low,1\n");
  CHECK_THROWS_WITH_AS(load_csv(f3.path, simple_schema(), "time", "event"),
                       doctest::Contains("event"), std::runtime_error);
}

TEST_CASE("standardize: population variance, hand values") {
  SurvivalDataset d;
  d.specs = {{"a", FeatureKind::continuous, {}, 0, 0, false}};
  d.X.resize(3, 1);
  d.X << 1, 2, 3;
  d.y.resize(3);
  d.y << 1, 2, 3;
  d.delta = {1, 1, 1};

  const auto [sd, stats] = standardize(d);
  const double expected = 1.0 / std::sqrt(2.0 / 3.0);
  CHECK(sd.X(0, 0) == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(sd.X(1, 0) == doctest::Approx(0.0));
  CHECK(sd.X(2, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(stats.mean[0] == doctest::Approx(2.0));
  CHECK(stats.stddev[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));

  // idempotence up to 1e-12
  const auto [sd2, stats2] = standardize(sd);
  CHECK((sd2.X - sd.X).cwiseAbs().maxCoeff() < 1e-12);

  // apply training stats to new values
  Eigen::MatrixXd xn(2, 1);
  xn << 2.0, 4.0;
  const Eigen::MatrixXd t = apply_standardization(stats, xn);
  CHECK(t(0, 0) == doctest::Approx(0.0));
  CHECK(t(1, 0) == doctest::Approx(2.0 / std::sqrt(2.0 / 3.0)));

  // round trip on the training matrix is exact
  const Eigen::MatrixXd again = apply_standardization(stats, d.X);
  CHECK(again == sd.X);
}

TEST_CASE("standardize leaves constant and categorical columns untouched") {
  SurvivalDataset d;
  d.specs = {{"c", FeatureKind::continuous, {}, 0, 0, false},
             {"g", FeatureKind::categorical, {"x", "y"}, 0, 0, false}};
  d.X.resize(3, 2);
  d.X << 5, 1, 5, 0, 5, 1;
  d.y.resize(3);
  d.y << 1, 2, 3;
  d.delta = {1, 1, 1};
  const auto [sd, stats] = standardize(d);
  CHECK(sd.X == d.X);
  CHECK(stats.constant[0] == 1);
  CHECK(stats.scaled[0] == 0);
  CHECK(stats.scaled[1] == 0);
  // constant-flagged columns pass through apply_standardization unchanged
  CHECK(apply_standardization(stats, d.X) == d.X);
}

TEST_CASE("apply_standardization rejects dimension mismatch") {
  StandardizationStats stats;
  stats.mean = Eigen::VectorXd::Zero(2);
  stats.stddev = Eigen::VectorXd::Ones(2);
  stats.scaled = {1, 1};
  stats.constant = {0, 0};
  Eigen::MatrixXd x(1, 3);
  x << 1, 2, 3;
  CHECK_THROWS_AS(apply_standardization(stats, x), std::invalid_argument);
}

TEST_CASE("dummy_encode expands categoricals to one-hot") {
  std::vector<FeatureSpec> specs = {
      {"a", FeatureKind::continuous, {}, 0, 0, false},
      {"g", FeatureKind::categorical, {"x", "y", "z"}, 0, 0, false}};
  Eigen::MatrixXd X(2, 2);
  X << 1.5, 2, 2.5, 0;
  const Eigen::MatrixXd E = dummy_encode(X, specs);
  REQUIRE(E.cols() == 4);
  CHECK(E(0, 0) == 1.5);
  CHECK(E(0, 3) == 1.0);
  CHECK(E(1, 1) == 1.0);
  CHECK(E(1, 2) == 0.0);
}

TEST_CASE("save_csv then load_csv round-trips") {
  SurvivalDataset d;
  d.specs = simple_schema();
  d.X.resize(2, 2);
  d.X << 0.125, 1, 2.5, 0;
  d.y.resize(2);
  d.y << 1.5, 2.25;
  d.delta = {1, 0};
  const std::string path = std::string(std::tmpnam(nullptr)) + ".csv";
  save_csv(path, d);
  const auto back = load_csv(path, d.specs, "time", "event");
  CHECK(back.X == d.X);
  CHECK(back.y == d.y);
  CHECK(back.delta == d.delta);
  std::remove(path.c_str());
}
