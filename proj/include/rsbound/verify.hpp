#pragma once

// A scenario ties a summand law, an index law and a bound together and
// checks the bound against the exact or simulated distance.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "rsbound/bounds.hpp"
#include "rsbound/counting.hpp"
#include "rsbound/dists.hpp"
#include "rsbound/lattice.hpp"

namespace rsbound {

enum class Method { Exact, MonteCarlo };

std::string to_string(Method m);

struct Scenario {
  Scenario(std::string id_, SummandDistribution summand_, CountingLaw law_, BoundKind bound_)
      : id(std::move(id_)), summand(std::move(summand_)), law(std::move(law_)), bound(bound_) {}

  std::string id;
  SummandDistribution summand;
  CountingLaw law;
  BoundKind bound;
  Variant variant = Variant::IidGeneral;  // fixed_n only
  double epsilon = 1.0;                   // lindeberg only
  std::optional<GrowthFunction> growth;   // growth and growth_random
  std::optional<double> constant_override;
  Method method = Method::Exact;
  std::size_t replications = 1'000'000;
  double delta = 0.01;
  std::uint64_t seed = 20250101;
  ExactSumOptions exact;
  unsigned threads = 0;
};

/// Bound selected by the scenario; UsageError when the bound kind does not
/// match the index law.
BoundReport compute_bound(const Scenario& s);

struct VerificationReport {
  std::string scenario_id;
  Method method = Method::Exact;
  std::size_t replications = 0;  // Monte Carlo only
  double delta = 0.0;            // Monte Carlo only
  std::uint64_t seed = 0;        // Monte Carlo only
  double measured_delta = 0.0;
  double dkw_margin = 0.0;    // 0 for Exact
  double mass_deficit = 0.0;  // truncated index mass, Exact only
  BoundReport bound;
  bool pass = false;
};

/// Exact: pass iff measured + mass_deficit <= bound.
/// Monte Carlo: pass iff measured <= bound + dkw_margin.
VerificationReport verify_bound(const Scenario& s);

}  // namespace rsbound
