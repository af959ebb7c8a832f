#include "rsbound/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rsbound/errors.hpp"

namespace rsbound {
namespace {

using Section = ScenarioConfig::Section;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) throw UsageError(where + ": '" + text + "' is not a number");
  return v;
}

std::uint64_t to_u64(const std::string& text, const std::string& where) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw UsageError(where + ": '" + text + "' is not a nonnegative integer");
  }
  return v;
}

int to_int(const std::string& text, const std::string& where) {
  const std::uint64_t v = to_u64(text, where);
  if (v > 1'000'000'000ULL) throw UsageError(where + ": '" + text + "' is too large");
  return static_cast<int>(v);
}

// Typed access to one section; keys never read are reported as unknown.
class Reader {
 public:
  Reader(const Section& sec, std::string where) : sec_(sec), where_(std::move(where)) {}

  bool has(const std::string& key) const { return sec_.count(key) != 0; }

  std::string text(const std::string& key) {
    const auto it = sec_.find(key);
    if (it == sec_.end()) throw UsageError(where_ + ": missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }
  std::string text_or(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }
  double number(const std::string& key) { return to_double(text(key), field(key)); }
  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  int integer(const std::string& key) { return to_int(text(key), field(key)); }
  std::uint64_t u64_or(const std::string& key, std::uint64_t fallback) {
    return has(key) ? to_u64(text(key), field(key)) : fallback;
  }
  std::string field(const std::string& key) const { return where_ + " " + key; }

  void finish(const std::string& context) const {
    for (const auto& [k, v] : sec_) {
      if (!used_.count(k)) throw UsageError(where_ + ": unknown key '" + k + "'" + context);
    }
  }

 private:
  const Section& sec_;
  std::string where_;
  std::set<std::string> used_;
};

// Reruns a factory, turning domain errors into field-level usage errors.
template <class F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw UsageError(where + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UsageError(where + ": " + e.what());
  }
}

SummandDistribution build_summand(const Section& sec, const std::string& where, const std::filesystem::path& base) {
  Reader r(sec, where);
  const std::string family = r.text("family");
  auto build = [&]() -> SummandDistribution {
    if (family == "rademacher") return SummandDistribution::rademacher();
    if (family == "uniform") return SummandDistribution::uniform(r.number("halfwidth"));
    if (family == "two_point") return SummandDistribution::two_point(r.number("scale"));
    if (family == "pareto") return SummandDistribution::pareto(r.number("tail_index"), r.number_or("scale", 1.0));
    if (family == "lattice") {
      if (r.has("atoms") == r.has("csv")) throw UsageError(where + ": lattice needs exactly one of 'atoms' or 'csv'");
      if (r.has("csv")) {
        std::filesystem::path p = r.text("csv");
        if (p.is_relative() && !base.empty()) p = base / p;
        return SummandDistribution::load_lattice_csv(p);
      }
      std::vector<Atom> atoms;
      for (const std::string& item : split(r.text("atoms"), ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError(r.field("atoms") + ": expected value:probability, got '" + item + "'");
        atoms.push_back({to_double(trim(item.substr(0, colon)), r.field("atoms")),
                         to_double(trim(item.substr(colon + 1)), r.field("atoms"))});
      }
      return SummandDistribution::lattice(std::move(atoms));
    }
    throw UsageError(r.field("family") + ": unknown family '" + family +
                     "' (expected rademacher, uniform, two_point, pareto or lattice)");
  };
  SummandDistribution d = guarded(where, build);
  r.finish(" for family " + family);
  return d;
}

CountingLaw build_law(const Section& sec, const std::string& where) {
  Reader r(sec, where);
  const std::string kind = r.text("kind");
  auto build = [&]() -> CountingLaw {
    if (kind == "deterministic") return CountingLaw::deterministic(r.integer("n"));
    if (kind == "poisson_binomial") {
      std::vector<double> p;
      for (const std::string& item : split(r.text("probabilities"), ',')) {
        p.push_back(to_double(item, r.field("probabilities")));
      }
      return CountingLaw::poisson_binomial(std::move(p));
    }
    if (kind == "binomial") return CountingLaw::binomial(r.integer("n"), r.number("p"));
    if (kind == "poisson") return CountingLaw::poisson(r.number("lambda"));
    if (kind == "geometric") return CountingLaw::geometric(r.number("n"));
    if (kind == "negative_binomial") return CountingLaw::negative_binomial(r.number("r"), r.number("n"));
    if (kind == "poisson_inverse_gamma") return CountingLaw::poisson_inverse_gamma(r.number("r"), r.number("n"));
    throw UsageError(r.field("kind") + ": unknown counting law '" + kind + "'");
  };
  CountingLaw law = guarded(where, build);
  r.finish(" for counting law " + kind);
  return law;
}

void apply_bound(Scenario& s, const Section& sec, const std::string& where) {
  Reader r(sec, where);
  // kind was already read to construct the scenario
  r.text("kind");
  guarded(where, [&] {
    switch (s.bound) {
      case BoundKind::FixedN: s.variant = variant_from_int(r.integer("variant")); break;
      case BoundKind::Lindeberg: s.epsilon = r.number_or("epsilon", 1.0); break;
      case BoundKind::Growth:
      case BoundKind::GrowthRandom: s.growth = GrowthFunction::parse(r.text("growth")); break;
      default: break;
    }
    if (r.has("constant_override")) s.constant_override = r.number("constant_override");
    return 0;
  });
  r.finish(" for bound " + to_string(s.bound));
}

void apply_verification(Scenario& s, const Section& sec, const std::string& where) {
  Reader r(sec, where);
  const std::string method = r.text_or("method", "exact");
  if (method == "exact") {
    s.method = Method::Exact;
  } else if (method == "montecarlo") {
    s.method = Method::MonteCarlo;
  } else {
    throw UsageError(r.field("method") + ": expected exact or montecarlo, got '" + method + "'");
  }
  s.replications = r.u64_or("replications", s.replications);
  if (s.replications == 0) throw UsageError(r.field("replications") + ": must be at least 1");
  s.delta = r.number_or("delta", s.delta);
  if (!(s.delta > 0.0 && s.delta < 1.0)) throw UsageError(r.field("delta") + ": must lie in (0, 1)");
  s.seed = r.u64_or("seed", s.seed);
  s.exact.tail_tol = r.number_or("tail_tol", s.exact.tail_tol);
  if (!(s.exact.tail_tol >= 0.0 && s.exact.tail_tol < 1.0)) throw UsageError(r.field("tail_tol") + ": must lie in [0, 1)");
  s.exact.cell_budget = r.u64_or("cell_budget", s.exact.cell_budget);
  r.finish("");
}

void write_section(std::ostream& out, const char* name, const Section& sec) {
  out << '[' << name << "]\n";
  for (const auto& [k, v] : sec) out << k << " = " << v << '\n';
  out << '\n';
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "markdown") return OutputFormat::Markdown;
  throw UsageError("output format must be csv or markdown, got '" + s + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "markdown"; }

Scenario build_scenario(const ScenarioConfig& cfg, const std::filesystem::path& base_dir) {
  const std::string tag = "scenario '" + cfg.id + "' ";
  if (cfg.summand.empty()) throw UsageError(tag + "has no [summand] section");
  if (cfg.counting_law.empty()) throw UsageError(tag + "has no [counting_law] section");
  if (cfg.bound.empty()) throw UsageError(tag + "has no [bound] section");
  const auto kind_it = cfg.bound.find("kind");
  if (kind_it == cfg.bound.end()) throw UsageError(tag + "[bound]: missing key 'kind'");
  Scenario s(cfg.id, build_summand(cfg.summand, tag + "[summand]", base_dir),
             build_law(cfg.counting_law, tag + "[counting_law]"), bound_kind_from_string(kind_it->second));
  apply_bound(s, cfg.bound, tag + "[bound]");
  apply_verification(s, cfg.verification, tag + "[verification]");
  return s;
}

SuiteConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  SuiteConfig cfg;
  cfg.base_dir = base_dir;
  Section* current = nullptr;
  std::set<std::string> seen_in_scenario;
  bool output_seen = false;
  bool in_output = false;
  bool in_scenario_header = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw UsageError("line " + std::to_string(lineno) + ": " + msg); };

  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      in_output = false;
      in_scenario_header = false;
      current = nullptr;
      if (name == "output") {
        if (output_seen) fail("duplicate [output] section");
        output_seen = true;
        in_output = true;
      } else if (name == "scenario") {
        cfg.scenarios.emplace_back();
        seen_in_scenario.clear();
        in_scenario_header = true;
      } else if (name == "summand" || name == "counting_law" || name == "bound" || name == "verification") {
        if (cfg.scenarios.empty()) fail("[" + name + "] before any [scenario]");
        if (!seen_in_scenario.insert(name).second) fail("duplicate [" + name + "] in one scenario");
        auto& sc = cfg.scenarios.back();
        current = name == "summand" ? &sc.summand
                  : name == "counting_law" ? &sc.counting_law
                  : name == "bound" ? &sc.bound
                                    : &sc.verification;
      } else {
        fail("unknown section [" + name + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (value.empty()) fail("empty value for '" + key + "'");

    if (in_output) {
      if (key != "format") fail("unknown key '" + key + "' in [output]");
      cfg.format = output_format_from_string(value);
    } else if (in_scenario_header) {
      if (key != "id") fail("unknown key '" + key + "' in [scenario]");
      if (!cfg.scenarios.back().id.empty()) fail("duplicate key 'id'");
      cfg.scenarios.back().id = value;
    } else if (current) {
      if (!current->emplace(key, value).second) fail("duplicate key '" + key + "'");
    } else {
      fail("key outside of any section");
    }
  }

  std::set<std::string> ids;
  for (const auto& sc : cfg.scenarios) {
    if (sc.id.empty()) throw UsageError("a [scenario] section has no id");
    if (!ids.insert(sc.id).second) throw UsageError("duplicate scenario id '" + sc.id + "'");
    build_scenario(sc, base_dir);
  }
  return cfg;
}

SuiteConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

std::string serialize_config(const SuiteConfig& cfg) {
  std::ostringstream out;
  out << "[output]\nformat = " << to_string(cfg.format) << "\n\n";
  for (const auto& sc : cfg.scenarios) {
    out << "[scenario]\nid = " << sc.id << "\n\n";
    write_section(out, "summand", sc.summand);
    write_section(out, "counting_law", sc.counting_law);
    write_section(out, "bound", sc.bound);
    if (!sc.verification.empty()) write_section(out, "verification", sc.verification);
  }
  return out.str();
}

}  // namespace rsbound
