#pragma once

// Text serialization of hypothesis reports, verdicts and curves.

#include "maxclaim/theorems.hpp"

#include <ostream>
#include <string>

namespace maxclaim {

/// 17 significant digits, locale independent.
std::string format_number(double v);

void write_condition(std::ostream& os, const ConditionReport& c);

/// `key: value` lines, one condition per line.
void write_hypotheses(std::ostream& os, const HypothesisReport& r);
void write_verdict(std::ostream& os, const OrderVerdict& v);
void write_theorem_verdict(std::ostream& os, const TheoremVerdict& v);

/// CSV with header `x,<label_a>,<label_b>`.
void write_curves_csv(std::ostream& os, const SurvivalCurves& curves, const std::string& label_a,
                      const std::string& label_b);

}  // namespace maxclaim
