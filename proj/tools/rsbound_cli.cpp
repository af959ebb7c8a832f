// rsbound: constant tables, bounds, verification runs and limit-law grids.

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rsbound/bounds.hpp"
#include "rsbound/config.hpp"
#include "rsbound/constants.hpp"
#include "rsbound/errors.hpp"
#include "rsbound/limitlaws.hpp"
#include "rsbound/montecarlo.hpp"
#include "rsbound/verify.hpp"
#include "rsbound/version.hpp"

namespace fs = std::filesystem;
using namespace rsbound;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3 };

std::string num(double v, int digits = 10) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string header_comment() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# rsbound %s constants-fnv1a64=%016" PRIx64, kVersion, constants::registry_hash());
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out, OutputFormat f) const {
    if (f == OutputFormat::Csv) {
      out << header_comment() << '\n';
      emit(out, columns, ",", "", "");
      for (const auto& r : rows) emit(out, r, ",", "", "");
      return;
    }
    out << "<!-- " << header_comment().substr(2) << " -->\n";
    emit(out, columns, " | ", "| ", " |");
    out << '|';
    for (std::size_t i = 0; i < columns.size(); ++i) out << " --- |";
    out << '\n';
    for (const auto& r : rows) emit(out, r, " | ", "| ", " |");
  }

 private:
  static void emit(std::ostream& out, const std::vector<std::string>& cells, const char* sep, const char* open,
                   const char* close) {
    out << open;
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? sep : "") << cells[i];
    out << close << '\n';
  }
};

int cmd_tables(std::optional<int> variant, const fs::path& out_dir, OutputFormat format) {
  std::vector<Variant> variants;
  if (variant) {
    variants.push_back(variant_from_int(*variant));
  } else {
    variants = {Variant::General, Variant::IidGeneral, Variant::Symmetric, Variant::IidSymmetric};
  }
  fs::create_directories(out_dir);
  int total = 0;
  int matched = 0;
  for (Variant v : variants) {
    const auto rows = reproduce_table(v);
    const auto expected = published_table(v);
    Table t{{"gamma", "computed_bound", "published_bound", "match"}, {}};
    int ok = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const bool match = std::llround(rows[i].bound * 1e4) == std::llround(expected[i] * 1e4);
      ok += match;
      char computed[32], published[32];
      std::snprintf(computed, sizeof computed, "%.4f", rows[i].bound);
      std::snprintf(published, sizeof published, "%.4f", expected[i]);
      const std::string g = i + 1 == rows.size() ? "inf" : num(rows[i].gamma_threshold);
      t.rows.push_back({g, computed, published, match ? "true" : "false"});
    }
    const fs::path file = out_dir / ("table_c" + std::to_string(static_cast<int>(v)) +
                                     (format == OutputFormat::Csv ? ".csv" : ".md"));
    std::ofstream out(file);
    if (!out) throw UsageError("cannot write " + file.string());
    t.write(out, format);
    std::cout << file.string() << ": " << ok << "/" << rows.size() << " entries match\n";
    total += static_cast<int>(rows.size());
    matched += ok;
  }
  return matched == total ? kOk : kFailed;
}

std::vector<std::string> bound_row(const std::string& id, const Scenario& s, const BoundReport& r) {
  return {id, to_string(r.kind), s.summand.label(), s.law.label(), num(r.bound_value), num(r.constant_used),
          num(r.gamma), num(r.L), num(r.M), num(r.normalization), r.limit_law.label()};
}

int cmd_bound(const SuiteConfig& cfg, OutputFormat format) {
  Table t{{"scenario_id", "bound_kind", "summand", "counting_law", "bound", "constant_used", "gamma", "L", "M",
           "normalization", "limit_law"},
          {}};
  for (const auto& sc : cfg.scenarios) {
    const Scenario s = build_scenario(sc, cfg.base_dir);
    try {
      t.rows.push_back(bound_row(sc.id, s, compute_bound(s)));
    } catch (const UnboundedError& e) {
      throw UnboundedError("scenario '" + sc.id + "': " + e.what());
    }
  }
  t.write(std::cout, format);
  return kOk;
}

int cmd_verify(const SuiteConfig& cfg, OutputFormat format, std::optional<std::uint64_t> seed,
               std::optional<double> constant_override, unsigned threads) {
  Table t{{"scenario_id", "method", "measured_delta", "dkw_margin", "bound", "constant_used", "pass", "replications",
           "delta", "seed", "mass_deficit"},
          {}};
  bool all = true;
  for (const auto& sc : cfg.scenarios) {
    Scenario s = build_scenario(sc, cfg.base_dir);
    if (seed) s.seed = *seed;
    if (constant_override) s.constant_override = *constant_override;
    s.threads = threads;
    VerificationReport rep;
    try {
      rep = verify_bound(s);
    } catch (const ResourceError& e) {
      throw ResourceError("scenario '" + sc.id + "': " + e.what());
    }
    all = all && rep.pass;
    const bool mc = rep.method == Method::MonteCarlo;
    t.rows.push_back({rep.scenario_id, to_string(rep.method), num(rep.measured_delta), num(rep.dkw_margin),
                      num(rep.bound.bound_value), num(rep.bound.constant_used), rep.pass ? "true" : "false",
                      mc ? std::to_string(rep.replications) : "", mc ? num(rep.delta) : "",
                      mc ? std::to_string(rep.seed) : "", num(rep.mass_deficit)});
  }
  if (format == OutputFormat::Csv) std::cout << "# generator " << kGeneratorName << '\n';
  t.write(std::cout, format);
  return all ? kOk : kFailed;
}

int cmd_laws(const std::string& law, double r, double from, double to, double step, OutputFormat format) {
  LimitLaw L;
  if (law == "normal") {
    L = LimitLaw::normal();
  } else if (law == "laplace") {
    L = LimitLaw::laplace();
  } else if (law == "variance_gamma") {
    L = LimitLaw::variance_gamma(r);
  } else if (law == "student") {
    L = LimitLaw::student(r);
  } else {
    throw UsageError("unknown law '" + law + "' (expected normal, laplace, variance_gamma or student)");
  }
  if (!(step > 0.0) || !(to >= from)) throw UsageError("grid needs step > 0 and to >= from");
  const long long count = std::llround(std::floor((to - from) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw UsageError("grid too large");
  Table t{{"x", "cdf"}, {}};
  for (long long i = 0; i < count; ++i) {
    const double x = from + static_cast<double>(i) * step;
    t.rows.push_back({num(x), num(L.cdf(x), 17)});
  }
  t.write(std::cout, format);
  return kOk;
}

SuiteConfig load(const std::string& path) { return load_config(path); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit-constant normal approximation bounds for sums and random sums"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string output;
  std::optional<int> variant;
  std::string out_dir = ".";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> constant_override;
  unsigned threads = 0;
  std::string law;
  double r = 1.0, from = -5.0, to = 5.0, step = 0.1;

  auto add_output = [&output](CLI::App* c) {
    c->add_option("--output", output, "Output format")->check(CLI::IsMember({"csv", "markdown"}));
  };

  auto* tables = app.add_subcommand("tables", "Reproduce the C(gamma) constant tables");
  tables->add_option("--variant", variant, "Constant variant 1..4 (default: all)");
  tables->add_option("--out-dir", out_dir, "Directory for table_c{v} files");
  add_output(tables);

  auto* bound = app.add_subcommand("bound", "Compute the bound for every scenario in a config file");
  bound->add_option("--config", config, "Scenario file")->required();
  add_output(bound);

  auto* verify = app.add_subcommand("verify", "Check bounds against exact or simulated distances");
  verify->add_option("--config", config, "Scenario file")->required();
  verify->add_option("--seed", seed, "Override every scenario seed");
  verify->add_option("--constant-override", constant_override, "Replace the bound constant (negative control)");
  verify->add_option("--threads", threads, "Worker threads for Monte Carlo (0 = all cores)");
  add_output(verify);

  auto* laws = app.add_subcommand("laws", "Evaluate a limit distribution function on a grid");
  laws->add_option("--law", law, "normal, laplace, variance_gamma or student")->required();
  laws->add_option("--r", r, "Shape parameter");
  laws->add_option("--from", from, "Grid start");
  laws->add_option("--to", to, "Grid end");
  laws->add_option("--step", step, "Grid step");
  add_output(laws);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto format_or = [&output](OutputFormat fallback) {
      return output.empty() ? fallback : output_format_from_string(output);
    };
    if (tables->parsed()) return cmd_tables(variant, out_dir, format_or(OutputFormat::Csv));
    if (laws->parsed()) return cmd_laws(law, r, from, to, step, format_or(OutputFormat::Csv));
    const SuiteConfig cfg = load(config);
    if (bound->parsed()) return cmd_bound(cfg, format_or(cfg.format));
    return cmd_verify(cfg, format_or(cfg.format), seed, constant_override, threads);
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
