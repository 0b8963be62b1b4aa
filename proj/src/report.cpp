#include "maxclaim/report.hpp"

#include <charconv>

namespace maxclaim {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

void write_condition(std::ostream& os, const ConditionReport& c) {
  os << "condition." << c.name << ": " << (c.passed ? "pass" : "fail")
     << " worst_violation=" << format_number(c.worst_violation)
     << " tolerance=" << format_number(c.tolerance) << " witness=(";
  for (std::size_t i = 0; i < c.witness.size(); ++i) {
    os << (i ? "," : "") << format_number(c.witness[i]);
  }
  os << ") grid=" << c.grid << '\n';
}

void write_hypotheses(std::ostream& os, const HypothesisReport& r) {
  os << "theorem: " << to_string(r.theorem) << '\n';
  for (const auto& c : r.conditions) write_condition(os, c);
  os << "all_passed: " << (r.all_passed ? "true" : "false") << '\n';
}

void write_verdict(std::ostream& os, const OrderVerdict& v) {
  os << "verdict: " << to_string(v.relation) << '\n'
     << "max_gap_a_over_b: " << format_number(v.max_gap_a_over_b) << '\n'
     << "max_gap_b_over_a: " << format_number(v.max_gap_b_over_a) << '\n';
  if (v.relation == OrderRelation::kCrossing) {
    os << "crossing_at: " << format_number(v.crossing_location) << '\n';
  }
  os << "grid: " << v.grid << '\n';
}

void write_theorem_verdict(std::ostream& os, const TheoremVerdict& v) {
  write_hypotheses(os, v.hypotheses);
  write_verdict(os, v.verdict);
  os << "conclusion_confirmed: " << (v.conclusion_confirmed ? "true" : "false") << '\n';
}

void write_curves_csv(std::ostream& os, const SurvivalCurves& curves, const std::string& label_a,
                      const std::string& label_b) {
  os << "x," << label_a << ',' << label_b << '\n';
  for (Eigen::Index i = 0; i < curves.x.size(); ++i) {
    os << format_number(curves.x(i)) << ',' << format_number(curves.survival_a(i)) << ','
       << format_number(curves.survival_b(i)) << '\n';
  }
}

}  // namespace maxclaim
