#pragma once

// Flat `key = value` scenario files describing two portfolios to compare.
//
//   name = "example 1"
//   theorem = T5
//   expect = dominance
//   h = identity
//   portfolio_a.margin.1.family = "gamma"
//   portfolio_a.margin.1.shape = 0.8
//   portfolio_a.margin.1.rate = 0.4
//   portfolio_a.copula.family = "fgm"
//   portfolio_a.copula.theta = 0.5
//   portfolio_a.indicators.model = "independent"
//   portfolio_a.indicators.p.1 = 0.026
//
// Strings may be quoted; numbers are bare. `#` starts a comment.

#include "maxclaim/theorems.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace maxclaim {

class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(int line, std::string field, const std::string& message);
  /// 1-based line, or 0 when the problem is not tied to a line.
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct ScenarioFile {
  std::string name;
  std::optional<TheoremId> theorem;
  /// Relation the scenario is expected to show between A and B.
  std::optional<OrderRelation> expect;
  Scenario scenario;
};

ScenarioFile parse_scenario(std::string_view text);

/// Throws std::system_error with std::errc::no_such_file_or_directory when
/// the file cannot be opened.
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize_scenario(f)) == f. Custom
/// baselines and copulas cannot be written and throw std::invalid_argument.
std::string serialize_scenario(const ScenarioFile& file);

inline constexpr int kBuiltinScenarioCount = 7;

/// Text of the built-in worked example n (1-based).
std::string_view builtin_scenario(int n);

}  // namespace maxclaim
