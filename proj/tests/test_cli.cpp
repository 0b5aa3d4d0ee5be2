// End-to-end checks of the ssvm binary. The test runner exports SSVM_CLI
// with the path to the freshly built executable.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* p = std::getenv("SSVM_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SSVM_CLI must point at the ssvm binary");
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = "\"" + cli_path() + "\" " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ssvm-cli-test-" + std::to_string(static_cast<long>(getpid())));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const {
    return (path / f).string();
  }
};

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("cli: synth-gen writes the corpus and honors the seed") {
  TempDir tmp;
  const std::string base =
      "synth-gen --n-train 120 --n-test 80 --seed 9 --out-dir ";
  CHECK(run(base + tmp / "a").exit_code == 0);
  CHECK(run(base + tmp / "b").exit_code == 0);
  for (const auto f : {"train.csv", "test.csv", "meta.json"}) {
    const auto a = slurp(tmp.path / "a" / f);
    CHECK(!a.empty());
    CHECK(a == slurp(tmp.path / "b" / f));
  }
  // 120 data rows + header
  CHECK(count_lines(slurp(tmp.path / "a" / "train.csv")) == 121);
  CHECK(run("synth-gen --n-train 5 --n-test 5 --seed 1 --out-dir "
            "/proc/nope").exit_code == 1);
}

TEST_CASE("cli: train, predict, evaluate") {
  TempDir tmp;
  REQUIRE(run("synth-gen --n-train 200 --n-test 150 --seed 17 --out-dir " +
              tmp / "").exit_code == 0);
  const std::string schema = " --schema " + tmp / "meta.json";

  SUBCASE("fit then evaluate gives c above chance") {
    CHECK(run("train --data " + tmp / "train.csv" + schema +
              " --kernel clinical --gamma 0.25 --out-model " +
              tmp / "m.json").exit_code == 0);
    const auto ev = run("evaluate --model " + tmp / "m.json" + " --data " +
                        tmp / "test.csv" + schema);
    CHECK(ev.exit_code == 0);
    std::stringstream ss(ev.out);
    std::string header, first;
    std::getline(ss, header);
    std::getline(ss, first, ',');
    CHECK(header.rfind("cindex", 0) == 0);
    const double c = std::stod(first);
    CHECK(c > 0.5);
    CHECK(c <= 1.0);
  }

  SUBCASE("predict: documented header and model round-trip stability") {
    REQUIRE(run("train --data " + tmp / "train.csv" + schema +
                " --kernel rbf --gamma 1 --out-model " +
                tmp / "m.json").exit_code == 0);
    const auto a = run("predict --model " + tmp / "m.json" + " --data " +
                       tmp / "test.csv" + schema);
    CHECK(a.exit_code == 0);
    CHECK(a.out.rfind("row,score\n", 0) == 0);
    CHECK(count_lines(a.out) == 151);
    const auto b = run("predict --model " + tmp / "m.json" + " --data " +
                       tmp / "test.csv" + schema);
    CHECK(a.out == b.out);
  }

  SUBCASE("exit codes: 1 on bad input, 2 on iteration cap") {
    CHECK(run("train --data " + tmp / "missing.csv" + " --out-model " +
              tmp / "m.json").exit_code == 1);
    CHECK(run("train --data " + tmp / "train.csv" + schema +
              " --gamma -2").exit_code != 0);
    CHECK(run("train --data " + tmp / "train.csv" + schema +
              " --kernel rbf --gamma 64 --max-newton 1 --out-model " +
              tmp / "capped.json").exit_code == 2);
    CHECK(fs::exists(tmp.path / "capped.json"));  // result still written
  }

  SUBCASE("config file supplies defaults") {
    {
      std::ofstream cfg(tmp / "config.json");
      cfg << R"({"train": {"kernel": "clinical", "gamma": 0.25,
                 "data": ")" << tmp / "train.csv" << R"(",
                 "schema": ")" << tmp / "meta.json" << R"(",
                 "out-model": ")" << tmp / "via_config.json" << R"("}})";
    }
    CHECK(run("--config " + tmp / "config.json" + " train").exit_code == 0);
    CHECK(run("train --data " + tmp / "train.csv" + schema +
              " --kernel clinical --gamma 0.25 --out-model " +
              tmp / "direct.json").exit_code == 0);
    CHECK(slurp(tmp.path / "via_config.json") ==
          slurp(tmp.path / "direct.json"));
  }
}

TEST_CASE("cli: grid-search table and determinism") {
  TempDir tmp;
  REQUIRE(run("synth-gen --n-train 80 --n-test 40 --seed 23 --out-dir " +
              tmp / "").exit_code == 0);
  const std::string cmd = "grid-search --data " + tmp / "train.csv" +
                          " --schema " + tmp / "meta.json" +
                          " --grid 0.125,1,8 --splits 3 --seed 2";
  const auto a = run(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.out.rfind("gamma,mean_cindex\n", 0) == 0);
  // header + one row per grid value + the chosen-gamma line
  CHECK(count_lines(a.out) == 5);
  std::string best_line = a.out.substr(a.out.rfind("best,"));
  const double best = std::stod(best_line.substr(5));
  CHECK((best == 0.125 || best == 1.0 || best == 8.0));
  CHECK(run(cmd).out == a.out);
  // power syntax expands to the documented 13-point grid
  const auto p = run("grid-search --data " + tmp / "train.csv" +
                     " --schema " + tmp / "meta.json" +
                     " --grid 2^-12..2^12:step2^2 --splits 2 --seed 2");
  CHECK(p.exit_code == 0);
  CHECK(count_lines(p.out) == 15);
}

TEST_CASE("cli: benchmark and experiment emit documented CSV") {
  TempDir tmp;
  const auto b = run("benchmark --sizes 300,600 --seed 4");
  CHECK(b.exit_code == 0);
  CHECK(b.out.rfind("stage,n,milliseconds\n", 0) == 0);
  CHECK(b.out.find("counting_fast,300,") != std::string::npos);
  CHECK(b.out.find("counting_naive,600,") != std::string::npos);
  CHECK(b.out.find("hessvec_total,600,") != std::string::npos);
  CHECK(b.out.find("gram_serial,600,") != std::string::npos);

  const std::string e_cmd =
      "experiment --replicates 2 --n 120 --kernels linear,clinical --seed 6 "
      "--gamma 0.5 --max-newton 30";
  const auto e = run(e_cmd);
  CHECK(e.exit_code == 0);
  CHECK(e.out.rfind("kernel,pair_mode,mean_cindex,stddev_cindex,replicates\n",
                    0) == 0);
  // one row per (kernel, pair mode)
  CHECK(count_lines(e.out) == 5);
  CHECK(e.out.find("linear,full,") != std::string::npos);
  CHECK(e.out.find("clinical,reduced,") != std::string::npos);
  CHECK(run(e_cmd).out == e.out);
}
