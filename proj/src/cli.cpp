#include "maxclaim/cli.hpp"

#include "maxclaim/report.hpp"
#include "maxclaim/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

namespace maxclaim::cli {
namespace {

struct GridFlags {
  std::optional<int> points;
  std::optional<double> q_low;
  std::optional<double> q_high;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--points", points, "Number of grid points")->check(CLI::PositiveNumber);
    cmd->add_option("--qlo", q_low, "Lower mixture quantile of the grid")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--qhi", q_high, "Upper mixture quantile of the grid")
        ->check(CLI::Range(0.0, 1.0));
  }

  // Returns false when the combined bounds are unusable.
  bool apply(GridSpec& g) const {
    if (points) g.points = *points;
    if (q_low) g.q_low = *q_low;
    if (q_high) g.q_high = *q_high;
    return g.q_low > 0.0 && g.q_low < g.q_high && g.q_high < 1.0;
  }
};

// Loads a scenario, mapping failures to exit codes.
std::optional<ScenarioFile> load(const std::string& path, std::ostream& err, int& code) {
  try {
    return load_scenario(path);
  } catch (const std::system_error& e) {
    err << "error: cannot open '" << path << "'\n";
    code = kMissingFile;
  } catch (const ScenarioParseError& e) {
    err << path << ": " << e.what() << '\n';
    code = kParseError;
  }
  return std::nullopt;
}

bool write_file(const std::filesystem::path& path, const std::string& body, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << body;
  f.close();
  if (!f) {
    err << "error: cannot write '" << path.string() << "'\n";
    return false;
  }
  return true;
}

// Survival curves with the reference portfolio first, as the examples plot
// them.
SurvivalCurves reference_first(SurvivalCurves c) {
  std::swap(c.survival_a, c.survival_b);
  return c;
}

int cmd_example(int n, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  if (n < 1 || n > kBuiltinScenarioCount) {
    err << "error: example number must be in 1.." << kBuiltinScenarioCount << '\n';
    return kUsage;
  }
  const ScenarioFile file = parse_scenario(builtin_scenario(n));
  const Scenario& s = file.scenario;
  const TheoremVerdict v = verify_theorem(*file.theorem, s);

  std::ostringstream report;
  report << "scenario: " << file.name << '\n';
  write_theorem_verdict(report, v);
  report << "expected: " << to_string(*file.expect) << '\n';
  const bool matches = v.verdict.relation == *file.expect;
  report << "matches_expected: " << (matches ? "true" : "false") << '\n';

  std::ostringstream csv;
  write_curves_csv(csv, reference_first(survival_curves(s.a, s.b, default_grid(s.a, s.b, s.grid))),
                   "survival_Y", "survival_Ystar");

  const std::filesystem::path dir(out_dir);
  const std::string stem = "example" + std::to_string(n);
  if (!write_file(dir / (stem + "_curves.csv"), csv.str(), err) ||
      !write_file(dir / (stem + "_report.txt"), report.str(), err)) {
    return kIoError;
  }
  out << report.str();
  return matches ? kOk : kRefuted;
}

int cmd_check(const std::string& path, const std::optional<std::string>& theorem_flag,
              const GridFlags& flags, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto file = load(path, err, code);
  if (!file) return code;
  std::optional<TheoremId> id = file->theorem;
  if (theorem_flag) {
    id = parse_theorem_id(*theorem_flag);
    if (!id) {
      err << "error: unknown theorem '" << *theorem_flag << "'\n";
      return kUsage;
    }
  }
  if (!id) {
    err << "error: no theorem given (use --theorem or a `theorem` key)\n";
    return kUsage;
  }
  if (!flags.apply(file->scenario.grid)) {
    err << "error: need 0 < qlo < qhi < 1\n";
    return kUsage;
  }
  TheoremVerdict v;
  try {
    v = verify_theorem(*id, file->scenario);
  } catch (const ScenarioShapeError& e) {
    err << path << ": " << e.what() << '\n';
    return kParseError;
  }
  write_theorem_verdict(out, v);
  if (!v.hypotheses.all_passed) return kHypothesesFailed;
  return v.conclusion_confirmed ? kOk : kRefuted;
}

std::ostream* open_output(const std::optional<std::string>& path, std::ofstream& file,
                          std::ostream& out) {
  if (!path) return &out;
  file.open(*path, std::ios::binary);
  return file ? &file : nullptr;
}

int cmd_curve(const std::string& path, const GridFlags& flags,
              const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto file = load(path, err, code);
  if (!file) return code;
  Scenario& s = file->scenario;
  if (!flags.apply(s.grid)) {
    err << "error: need 0 < qlo < qhi < 1\n";
    return kUsage;
  }
  std::ofstream f;
  std::ostream* os = open_output(out_path, f, out);
  if (os == nullptr) {
    err << "error: cannot write '" << *out_path << "'\n";
    return kIoError;
  }
  write_curves_csv(*os, survival_curves(s.a, s.b, default_grid(s.a, s.b, s.grid)), "survival_A",
                   "survival_B");
  os->flush();
  return *os ? kOk : kIoError;
}

int cmd_sample(const std::string& path, long long count, std::uint64_t seed,
               const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
  if (count < 1) {
    err << "error: --count must be at least 1\n";
    return kUsage;
  }
  int code = kOk;
  auto file = load(path, err, code);
  if (!file) return code;
  const Scenario& s = file->scenario;
  for (const Portfolio* pf : {&s.a, &s.b}) {
    if (pf->size() < 2 || pf->size() > 3) {
      err << path << ": sampling supports portfolios of two or three policies\n";
      return kParseError;
    }
  }
  std::ofstream f;
  std::ostream* os = open_output(out_path, f, out);
  if (os == nullptr) {
    err << "error: cannot write '" << *out_path << "'\n";
    return kIoError;
  }
  Rng rng(seed);
  *os << "draw_index,y_max_A,y_max_B\n";
  for (long long i = 0; i < count; ++i) {
    const double ya = sample_max(s.a, rng);
    const double yb = sample_max(s.b, rng);
    *os << i << ',' << format_number(ya) << ',' << format_number(yb) << '\n';
  }
  os->flush();
  return *os ? kOk : kIoError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Largest-claim ordering checks for dependent insurance portfolios", "maxclaim"};
  app.require_subcommand(1);

  int example_n = 0;
  std::string example_out = ".";
  auto* example = app.add_subcommand("example", "Reproduce a built-in worked example");
  example->add_option("n", example_n, "Example number (1-7)")->required();
  example->add_option("--out", example_out, "Directory for the CSV and report");

  std::string path;
  std::optional<std::string> theorem;
  GridFlags check_grid;
  auto* check = app.add_subcommand("check", "Check a theorem's hypotheses and conclusion");
  check->add_option("scenario", path, "Scenario file")->required();
  check->add_option("--theorem", theorem, "Theorem id, e.g. T5");
  check_grid.add_to(check);

  GridFlags curve_grid;
  std::optional<std::string> out_path;
  auto* curve = app.add_subcommand("curve", "Print both survival curves as CSV");
  curve->add_option("scenario", path, "Scenario file")->required();
  curve_grid.add_to(curve);
  curve->add_option("--out", out_path, "Output file (default: standard output)");

  long long count = 0;
  std::uint64_t seed = 1;
  auto* sample = app.add_subcommand("sample", "Draw the largest claim of both portfolios");
  sample->add_option("scenario", path, "Scenario file")->required();
  sample->add_option("--count", count, "Number of draws")->required();
  sample->add_option("--seed", seed, "Random seed");
  sample->add_option("--out", out_path, "Output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (*example) return cmd_example(example_n, example_out, out, err);
    if (*check) return cmd_check(path, theorem, check_grid, out, err);
    if (*curve) return cmd_curve(path, curve_grid, out_path, out, err);
    return cmd_sample(path, count, seed, out_path, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
}

}  // namespace maxclaim::cli
