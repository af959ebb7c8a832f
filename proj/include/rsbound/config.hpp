#pragma once

// Scenario files: INI-style sections of `key = value` lines. A file holds an
// optional [output] section and any number of scenarios, each opened by a
// [scenario] section and followed by its [summand], [counting_law], [bound]
// and optional [verification] sections. `#` and `;` start comments.
//
//   [scenario]      id
//   [summand]       family = rademacher | uniform | two_point | pareto | lattice
//                   halfwidth (uniform), scale (two_point, pareto),
//                   tail_index (pareto), atoms = v:p, v:p, ... | csv = path (lattice)
//   [counting_law]  kind = deterministic (n) | poisson_binomial (probabilities = p, p, ...)
//                   | binomial (n, p) | poisson (lambda) | geometric (n)
//                   | negative_binomial (r, n) | poisson_inverse_gamma (r, n)
//   [bound]         kind = fixed_n | lindeberg | growth | poisson_binomial | binomial
//                   | poisson | growth_random | berry_esseen_poisson | mixed_poisson
//                   | geometric | negative_binomial | sichel
//                   variant (fixed_n), epsilon (lindeberg), growth (growth kinds),
//                   constant_override (any kind; debugging only)
//   [verification]  method = exact | montecarlo, replications, delta, seed,
//                   tail_tol, cell_budget
//   [output]        format = csv | markdown

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rsbound/verify.hpp"

namespace rsbound {

enum class OutputFormat { Csv, Markdown };

OutputFormat output_format_from_string(const std::string& s);
std::string to_string(OutputFormat f);

struct ScenarioConfig {
  using Section = std::map<std::string, std::string>;
  std::string id;
  Section summand;
  Section counting_law;
  Section bound;
  Section verification;

  bool operator==(const ScenarioConfig&) const = default;
};

struct SuiteConfig {
  OutputFormat format = OutputFormat::Csv;
  std::vector<ScenarioConfig> scenarios;
  /// Directory that relative lattice CSV paths resolve against.
  std::filesystem::path base_dir;

  bool operator==(const SuiteConfig& o) const { return format == o.format && scenarios == o.scenarios; }
};

/// Parses and validates; UsageError with the line or the section/field on failure.
SuiteConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
SuiteConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const SuiteConfig& cfg);

Scenario build_scenario(const ScenarioConfig& cfg, const std::filesystem::path& base_dir = {});

}  // namespace rsbound
