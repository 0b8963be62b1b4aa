#include <doctest.h>

#include "maxclaim/cli.hpp"
#include "maxclaim/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using maxclaim::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario_path(int n) {
  return (fs::path(MAXCLAIM_SOURCE_DIR) / "scenarios" / ("example" + std::to_string(n) + ".scn"))
      .string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("maxclaim-test-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(path_ / name, std::ios::binary) << body;
    return path_ / name;
  }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("example command") {
  TempDir dir;
  const Result one = invoke({"example", "1", "--out", dir.path().string()});
  CHECK(one.code == 0);
  CHECK(one.out.find("verdict: B_st_dominates_A") != std::string::npos);
  const std::string csv = read_file(dir.path() / "example1_curves.csv");
  CHECK(csv.rfind("x,survival_Y,survival_Ystar\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2002);
  CHECK(read_file(dir.path() / "example1_report.txt") == one.out);

  CHECK(invoke({"example", "6", "--out", dir.path().string()}).code == 0);
  CHECK(read_file(dir.path() / "example6_report.txt").find("verdict: crossing") != std::string::npos);
  CHECK(invoke({"example", "9", "--out", dir.path().string()}).code == 64);
  CHECK(invoke({"example", "0"}).code == 64);
  CHECK(invoke({"example", "x"}).code == 64);
  CHECK(invoke({"example", "2", "--out", (dir.path() / "missing" / "dir").string()}).code == 2);
}

TEST_CASE("check command") {
  TempDir dir;
  CHECK(invoke({"check", scenario_path(1)}).code == 0);
  CHECK(invoke({"check", scenario_path(1), "--theorem", "T5"}).code == 0);
  const Result two = invoke({"check", scenario_path(2), "--theorem", "T5"});
  CHECK(two.code == 4);
  CHECK(two.out.find("condition.in_S_lambda_h_p: fail") != std::string::npos);
  CHECK(invoke({"check", scenario_path(6)}).code == 4);
  CHECK(invoke({"check", scenario_path(7)}).code == 0);

  const Result empty = invoke({"check", dir.write("empty.scn", "").string()});
  CHECK(empty.code == 65);
  CHECK(empty.err.find("portfolio_a.margin.1.family") != std::string::npos);
  const Result bad = invoke({"check", dir.write("bad.scn", "name = 1\nwho = 2\n").string()});
  CHECK(bad.code == 65);

  CHECK(invoke({"check", (dir.path() / "absent.scn").string()}).code == 66);
  CHECK(invoke({"check", scenario_path(5), "--theorem", "T5"}).code == 65);
  CHECK(invoke({"check", scenario_path(1), "--theorem", "T4"}).code == 64);

  std::string text = std::string(maxclaim::builtin_scenario(1));
  text.replace(text.find("theorem = T5\n"), 13, "");
  CHECK(invoke({"check", dir.write("none.scn", text).string()}).code == 64);

  // A loose majorization tolerance admits unequal totals, so the conclusion
  // can be refuted while every listed hypothesis passes.
  std::string loose = std::string(maxclaim::builtin_scenario(1));
  loose.replace(loose.find("p.1 = 0.026"), 11, "p.1 = 0.03");
  loose.replace(loose.find("p.2 = 0.024"), 11, "p.2 = 0.03");
  loose += "tolerance.majorization = 1\n";
  const Result refuted = invoke({"check", dir.write("loose.scn", loose).string()});
  CHECK(refuted.code == 3);
  CHECK(refuted.out.find("all_passed: true") != std::string::npos);
}

TEST_CASE("curve command") {
  TempDir dir;
  const Result five = invoke({"curve", scenario_path(5)});
  CHECK(five.code == 0);
  CHECK(five.out == read_file(fs::path(MAXCLAIM_SOURCE_DIR) / "tests" / "golden" / "example5_curve.csv"));
  CHECK(invoke({"curve", scenario_path(5)}).out == five.out);

  const Result single = invoke({"curve", scenario_path(5), "--points", "1"});
  CHECK(single.code == 0);
  CHECK(std::count(single.out.begin(), single.out.end(), '\n') == 2);
  CHECK(single.out.rfind("x,survival_A,survival_B\n", 0) == 0);

  const Result narrow = invoke({"curve", scenario_path(1), "--points", "3", "--qlo", "0.1", "--qhi", "0.9"});
  CHECK(narrow.code == 0);
  CHECK(std::count(narrow.out.begin(), narrow.out.end(), '\n') == 4);

  CHECK(invoke({"curve", scenario_path(1), "--qlo", "0.9", "--qhi", "0.1"}).code == 64);
  CHECK(invoke({"curve", scenario_path(1), "--points", "0"}).code == 64);
  CHECK(invoke({"curve", (dir.path() / "absent.scn").string()}).code == 66);

  const fs::path out = dir.path() / "c.csv";
  CHECK(invoke({"curve", scenario_path(5), "--out", out.string()}).code == 0);
  CHECK(read_file(out) == five.out);
}

TEST_CASE("sample command") {
  TempDir dir;
  const auto a = invoke({"sample", scenario_path(1), "--count", "500", "--seed", "42"});
  const auto b = invoke({"sample", scenario_path(1), "--count", "500", "--seed", "42"});
  const auto c = invoke({"sample", scenario_path(1), "--count", "500", "--seed", "43"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(a.out.rfind("draw_index,y_max_A,y_max_B\n0,", 0) == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 501);

  const fs::path f1 = dir.path() / "s1.csv";
  const fs::path f2 = dir.path() / "s2.csv";
  CHECK(invoke({"sample", scenario_path(7), "--count", "100", "--seed", "5", "--out", f1.string()}).code == 0);
  CHECK(invoke({"sample", scenario_path(7), "--count", "100", "--seed", "5", "--out", f2.string()}).code == 0);
  CHECK(read_file(f1) == read_file(f2));

  CHECK(invoke({"sample", scenario_path(1), "--count", "0"}).code == 64);
  CHECK(invoke({"sample", scenario_path(1)}).code == 64);
  CHECK(invoke({"sample", (dir.path() / "absent.scn").string(), "--count", "3"}).code == 66);
}

TEST_CASE("usage") {
  CHECK(invoke({}).code == 64);
  CHECK(invoke({"frobnicate"}).code == 64);
  CHECK(invoke({"--help"}).code == 0);
}
