#include "maxclaim/scenario.hpp"

#include "maxclaim/builtin_scenarios.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace maxclaim {

ScenarioParseError::ScenarioParseError(int line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      line_(line),
      field_(std::move(field)) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  return true;
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Document {
 public:
  explicit Document(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      const std::string_view raw =
          text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      parse_line(raw, line_no);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::optional<std::string> text(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::string require_text(const std::string& key, int context_line = 0) {
    auto v = text(key);
    if (!v) throw ScenarioParseError(context_line, key, "missing required key");
    return *v;
  }

  std::optional<double> number(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    double out = 0.0;
    const char* first = v->data();
    const char* last = first + v->size();
    if (!v->empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || v->empty()) {
      throw ScenarioParseError(line_of(key), key, "expected a number, got '" + *v + "'");
    }
    return out;
  }

  double require_number(const std::string& key, int context_line = 0) {
    auto v = number(key);
    if (!v) throw ScenarioParseError(context_line, key, "missing required key");
    return *v;
  }

  void reject_unused() const {
    const Entry* first = nullptr;
    std::string key;
    for (const auto& [k, e] : entries_) {
      if (!e.used && (first == nullptr || e.line < first->line)) {
        first = &e;
        key = k;
      }
    }
    if (first != nullptr) throw ScenarioParseError(first->line, key, "unknown key");
  }

 private:
  void parse_line(std::string_view raw, int line_no) {
    // Strip a trailing comment that is not inside quotes.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string_view line = trim(raw.substr(0, cut));
    if (line.empty()) return;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioParseError(line_no, "", "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ScenarioParseError(line_no, key, "malformed key");
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"' ||
          value.substr(1, value.size() - 2).find('"') != std::string_view::npos) {
        throw ScenarioParseError(line_no, key, "unterminated string");
      }
      value = value.substr(1, value.size() - 2);
    } else if (value.empty()) {
      throw ScenarioParseError(line_no, key, "missing value");
    }
    if (entries_.count(key) != 0) {
      throw ScenarioParseError(line_no, key,
                               "duplicate key (first set on line " +
                                   std::to_string(entries_.at(key).line) + ")");
    }
    entries_.emplace(key, Entry{std::string(value), line_no, false});
  }

  std::map<std::string, Entry> entries_;
};

BaselineLaw parse_baseline(Document& doc, const std::string& key) {
  const std::string name = doc.require_text(key);
  if (name == "exponential") return BaselineLaw::standard_exponential();
  if (name == "uniform") return BaselineLaw::standard_uniform();
  throw ScenarioParseError(doc.line_of(key), key,
                           "unknown baseline '" + name + "' (exponential, uniform)");
}

Margin parse_margin(Document& doc, const std::string& prefix) {
  const std::string fam_key = prefix + ".family";
  const int line = doc.line_of(fam_key);
  const std::string family = doc.require_text(fam_key);
  auto num = [&](const char* field) { return doc.require_number(prefix + "." + field, line); };
  try {
    if (family == "gamma") return Margin::gamma(num("shape"), num("rate"));
    if (family == "pareto") return Margin::pareto(num("scale"), num("exponent"));
    if (family == "weibull") return Margin::weibull(num("shape"), num("rate"));
    if (family == "transmuted_exponential") {
      return Margin::transmuted_exponential(num("mean"), num("transmute"));
    }
    if (family == "scale") return Margin::scale(parse_baseline(doc, prefix + ".baseline"), num("rate"));
    if (family == "phr") return Margin::phr(parse_baseline(doc, prefix + ".baseline"), num("power"));
    if (family == "tg") return Margin::tg(parse_baseline(doc, prefix + ".baseline"), num("transmute"));
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(line, prefix, e.what());
  }
  throw ScenarioParseError(line, fam_key,
                           "unknown family '" + family +
                               "' (gamma, pareto, weibull, transmuted_exponential, scale, phr, tg)");
}

Copula parse_copula(Document& doc, const std::string& prefix, int n, int context_line) {
  const std::string fam_key = prefix + ".family";
  const int line = doc.has(fam_key) ? doc.line_of(fam_key) : context_line;
  const std::string family = doc.require_text(fam_key, context_line);
  const std::string dim_key = prefix + ".dimension";
  int dim = n;
  if (auto d = doc.number(dim_key)) {
    if (*d != static_cast<int>(*d) || *d < 1) {
      throw ScenarioParseError(doc.line_of(dim_key), dim_key, "expected a positive integer");
    }
    dim = static_cast<int>(*d);
  }
  auto theta = [&] { return doc.require_number(prefix + ".theta", line); };
  try {
    if (family == "independence") return Copula::independence(dim);
    if (family == "fgm") return Copula::fgm(dim, theta());
    if (family == "amh") return Copula::amh(theta());
    if (family == "gumbel_hougaard") return Copula::gumbel_hougaard(theta());
    if (family == "frank3") return Copula::frank3(theta());
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(line, prefix, e.what());
  }
  throw ScenarioParseError(line, fam_key,
                           "unknown family '" + family +
                               "' (independence, fgm, amh, gumbel_hougaard, frank3)");
}

IndicatorModel parse_indicators(Document& doc, const std::string& prefix, int n,
                                int context_line) {
  const std::string model_key = prefix + ".model";
  const int line = doc.has(model_key) ? doc.line_of(model_key) : context_line;
  const std::string model = doc.require_text(model_key, context_line);
  if (model == "independent") {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) {
      p(i) = doc.require_number(prefix + ".p." + std::to_string(i + 1), line);
    }
    return IndependentIndicators{p};
  }
  if (model == "joint") {
    return JointPairIndicators{doc.require_number(prefix + ".p00", line),
                               doc.require_number(prefix + ".p01", line),
                               doc.require_number(prefix + ".p10", line),
                               doc.require_number(prefix + ".p11", line)};
  }
  throw ScenarioParseError(line, model_key, "unknown model '" + model + "' (independent, joint)");
}

Portfolio parse_portfolio(Document& doc, const std::string& prefix) {
  std::vector<Margin> margins;
  int first_line = 0;
  for (int i = 1;; ++i) {
    const std::string m = prefix + ".margin." + std::to_string(i);
    if (!doc.has(m + ".family")) break;
    if (first_line == 0) first_line = doc.line_of(m + ".family");
    margins.push_back(parse_margin(doc, m));
  }
  if (margins.empty()) {
    throw ScenarioParseError(0, prefix + ".margin.1.family", "missing required key");
  }
  const int n = static_cast<int>(margins.size());
  Copula copula = parse_copula(doc, prefix + ".copula", n, first_line);
  IndicatorModel ind = parse_indicators(doc, prefix + ".indicators", n, first_line);
  try {
    return Portfolio(std::move(margins), std::move(copula), std::move(ind));
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(first_line, prefix, e.what());
  }
}

HFunction parse_h(Document& doc) {
  const auto name = doc.text("h");
  if (!name || *name == "identity") return HFunction::identity();
  if (*name == "sqrt") return HFunction::sqrt();
  if (*name == "log_shift2") return HFunction::log_shift2();
  if (*name != "tabulated") {
    throw ScenarioParseError(doc.line_of("h"), "h",
                             "unknown h '" + *name + "' (identity, sqrt, log_shift2, tabulated)");
  }
  const int line = doc.line_of("h.table");
  const std::string table = doc.require_text("h.table", doc.line_of("h"));
  std::vector<std::pair<double, double>> knots;
  std::istringstream in(table);
  std::string item;
  while (in >> item) {
    const auto colon = item.find(':');
    double p = 0.0;
    double u = 0.0;
    const bool ok =
        colon != std::string::npos &&
        std::from_chars(item.data(), item.data() + colon, p).ptr == item.data() + colon &&
        std::from_chars(item.data() + colon + 1, item.data() + item.size(), u).ptr ==
            item.data() + item.size();
    if (!ok) throw ScenarioParseError(line, "h.table", "expected 'p:h' pairs, got '" + item + "'");
    knots.emplace_back(p, u);
  }
  try {
    return HFunction::tabulated(std::move(knots));
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(line, "h.table", e.what());
  }
}

std::optional<OrderRelation> parse_expect(Document& doc) {
  const auto v = doc.text("expect");
  if (!v) return std::nullopt;
  if (*v == "dominance") return OrderRelation::kBStDominatesA;
  if (*v == "crossing") return OrderRelation::kCrossing;
  for (auto r : {OrderRelation::kAStDominatesB, OrderRelation::kBStDominatesA,
                 OrderRelation::kCrossing, OrderRelation::kIndistinguishable}) {
    if (*v == to_string(r)) return r;
  }
  throw ScenarioParseError(doc.line_of("expect"), "expect",
                           "unknown relation '" + *v + "' (dominance, crossing, ...)");
}

GridSpec parse_grid(Document& doc) {
  GridSpec g;
  if (auto pts = doc.number("grid.points")) {
    if (*pts != static_cast<int>(*pts) || *pts < 1) {
      throw ScenarioParseError(doc.line_of("grid.points"), "grid.points",
                               "expected a positive integer");
    }
    g.points = static_cast<int>(*pts);
  }
  if (auto q = doc.number("grid.qlo")) g.q_low = *q;
  if (auto q = doc.number("grid.qhi")) g.q_high = *q;
  if (!(g.q_low > 0.0 && g.q_low < g.q_high && g.q_high < 1.0)) {
    throw ScenarioParseError(doc.line_of("grid.qlo"), "grid", "need 0 < qlo < qhi < 1");
  }
  return g;
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
  Document doc(text);
  std::string name = doc.text("name").value_or("");
  std::optional<TheoremId> theorem;
  if (auto t = doc.text("theorem")) {
    theorem = parse_theorem_id(*t);
    if (!theorem) {
      throw ScenarioParseError(doc.line_of("theorem"), "theorem", "unknown theorem '" + *t + "'");
    }
  }
  auto expect = parse_expect(doc);
  HFunction h = parse_h(doc);
  GridSpec grid = parse_grid(doc);
  double tol = kMajorizationTolerance;
  if (auto t = doc.number("tolerance.majorization")) {
    if (!(*t >= 0.0)) {
      throw ScenarioParseError(doc.line_of("tolerance.majorization"), "tolerance.majorization",
                               "must be non-negative");
    }
    tol = *t;
  }
  Portfolio a = parse_portfolio(doc, "portfolio_a");
  Portfolio b = parse_portfolio(doc, "portfolio_b");
  doc.reject_unused();
  return ScenarioFile{std::move(name), theorem, expect,
                      Scenario{std::move(a), std::move(b), std::move(h), tol, grid}};
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory),
                            path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

std::string baseline_name(const BaselineLaw& b) {
  switch (b.kind()) {
    case BaselineLaw::Kind::kExponential:
      return "exponential";
    case BaselineLaw::Kind::kUniform:
      return "uniform";
    case BaselineLaw::Kind::kCustom:
      break;
  }
  throw std::invalid_argument("custom baselines cannot be serialized");
}

struct MarginWriter {
  std::ostream& os;
  const std::string& p;

  void kv(const char* k, const std::string& v) const { os << p << '.' << k << " = " << v << '\n'; }
  void kv(const char* k, double v) const { kv(k, shortest(v)); }

  void operator()(const GammaLaw& l) const {
    kv("family", "\"gamma\"");
    kv("shape", l.shape);
    kv("rate", l.rate);
  }
  void operator()(const ParetoLaw& l) const {
    kv("family", "\"pareto\"");
    kv("scale", l.scale);
    kv("exponent", l.exponent);
  }
  void operator()(const WeibullLaw& l) const {
    kv("family", "\"weibull\"");
    kv("shape", l.shape);
    kv("rate", l.rate);
  }
  void operator()(const TransmutedExponentialLaw& l) const {
    kv("family", "\"transmuted_exponential\"");
    kv("mean", l.mean);
    kv("transmute", l.transmute);
  }
  void operator()(const ScaleLaw& l) const {
    kv("family", "\"scale\"");
    kv("baseline", "\"" + baseline_name(l.baseline) + "\"");
    kv("rate", l.rate);
  }
  void operator()(const PhrLaw& l) const {
    kv("family", "\"phr\"");
    kv("baseline", "\"" + baseline_name(l.baseline) + "\"");
    kv("power", l.power);
  }
  void operator()(const TgLaw& l) const {
    kv("family", "\"tg\"");
    kv("baseline", "\"" + baseline_name(l.baseline) + "\"");
    kv("transmute", l.transmute);
  }
};

void write_copula(std::ostream& os, const std::string& p, const Copula& c) {
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, IndependenceCopula>) {
          os << p << ".family = \"independence\"\n";
        } else if constexpr (std::is_same_v<T, FgmCopula>) {
          os << p << ".family = \"fgm\"\n" << p << ".theta = " << shortest(f.theta) << '\n';
        } else if constexpr (std::is_same_v<T, AmhCopula>) {
          os << p << ".family = \"amh\"\n" << p << ".theta = " << shortest(f.theta) << '\n';
        } else if constexpr (std::is_same_v<T, GumbelHougaardCopula>) {
          os << p << ".family = \"gumbel_hougaard\"\n"
             << p << ".theta = " << shortest(f.theta) << '\n';
        } else if constexpr (std::is_same_v<T, Frank3Copula>) {
          os << p << ".family = \"frank3\"\n" << p << ".theta = " << shortest(f.theta) << '\n';
        } else {
          throw std::invalid_argument("custom copulas cannot be serialized");
        }
      },
      c.family());
  os << p << ".dimension = " << c.dimension() << '\n';
}

void write_portfolio(std::ostream& os, const std::string& p, const Portfolio& pf) {
  for (int i = 0; i < pf.size(); ++i) {
    const std::string mp = p + ".margin." + std::to_string(i + 1);
    std::visit(MarginWriter{os, mp}, pf.margins()[static_cast<std::size_t>(i)].law());
  }
  write_copula(os, p + ".copula", pf.copula());
  if (const auto* ind = std::get_if<IndependentIndicators>(&pf.indicators())) {
    os << p << ".indicators.model = \"independent\"\n";
    for (Eigen::Index i = 0; i < ind->p.size(); ++i) {
      os << p << ".indicators.p." << i + 1 << " = " << shortest(ind->p(i)) << '\n';
    }
  } else {
    const auto& j = std::get<JointPairIndicators>(pf.indicators());
    os << p << ".indicators.model = \"joint\"\n"
       << p << ".indicators.p00 = " << shortest(j.p00) << '\n'
       << p << ".indicators.p01 = " << shortest(j.p01) << '\n'
       << p << ".indicators.p10 = " << shortest(j.p10) << '\n'
       << p << ".indicators.p11 = " << shortest(j.p11) << '\n';
  }
}

}  // namespace

std::string serialize_scenario(const ScenarioFile& file) {
  std::ostringstream os;
  const Scenario& s = file.scenario;
  os << "name = \"" << file.name << "\"\n";
  if (file.theorem) os << "theorem = " << to_string(*file.theorem) << '\n';
  if (file.expect) os << "expect = " << to_string(*file.expect) << '\n';
  os << "h = " << s.h.name() << '\n';
  if (s.h.kind() == HFunction::Kind::kTabulated) {
    os << "h.table = \"";
    for (std::size_t i = 0; i < s.h.knots().size(); ++i) {
      os << (i ? " " : "") << shortest(s.h.knots()[i].first) << ':'
         << shortest(s.h.knots()[i].second);
    }
    os << "\"\n";
  }
  os << "grid.points = " << s.grid.points << '\n'
     << "grid.qlo = " << shortest(s.grid.q_low) << '\n'
     << "grid.qhi = " << shortest(s.grid.q_high) << '\n'
     << "tolerance.majorization = " << shortest(s.majorization_tolerance) << '\n';
  write_portfolio(os, "portfolio_a", s.a);
  write_portfolio(os, "portfolio_b", s.b);
  return os.str();
}

std::string_view builtin_scenario(int n) {
  if (n < 1 || n > kBuiltinScenarioCount) {
    throw std::out_of_range("built-in examples are numbered 1.." +
                            std::to_string(kBuiltinScenarioCount));
  }
  return detail::kBuiltinScenarios[static_cast<std::size_t>(n - 1)];
}

}  // namespace maxclaim
