#include "rsbound/verify.hpp"

#include <cmath>

#include "rsbound/errors.hpp"
#include "rsbound/montecarlo.hpp"

namespace rsbound {
namespace {

using LawKind = CountingLaw::Kind;

void expect_law(const Scenario& s, std::initializer_list<LawKind> kinds) {
  for (LawKind k : kinds) {
    if (s.law.kind() == k) return;
  }
  throw UsageError("scenario '" + s.id + "': bound '" + to_string(s.bound) + "' does not apply to index law " +
                   s.law.label());
}

const GrowthFunction& growth_of(const Scenario& s) {
  if (!s.growth) throw UsageError("scenario '" + s.id + "': bound '" + to_string(s.bound) + "' needs a growth function");
  return *s.growth;
}

BoundReport dispatch(const Scenario& s) {
  const auto& d = s.summand;
  const auto& law = s.law;
  switch (s.bound) {
    case BoundKind::FixedN:
      expect_law(s, {LawKind::Deterministic});
      return bound_fixed_n(s.variant, d, law.n());
    case BoundKind::Lindeberg:
      expect_law(s, {LawKind::Deterministic});
      return bound_osipov(d, law.n(), s.epsilon);
    case BoundKind::Growth:
      expect_law(s, {LawKind::Deterministic});
      return bound_growth(d, law.n(), growth_of(s));
    case BoundKind::PoissonBinomial:
      expect_law(s, {LawKind::PoissonBinomial});
      return bound_poisson_binomial(d, law.probabilities());
    case BoundKind::Binomial:
      expect_law(s, {LawKind::Binomial});
      return bound_binomial(d, law.n(), law.p());
    case BoundKind::Poisson:
      expect_law(s, {LawKind::Poisson});
      return bound_poisson(d, law.lambda());
    case BoundKind::GrowthRandom:
      expect_law(s, {LawKind::PoissonBinomial, LawKind::Binomial, LawKind::Poisson});
      return bound_growth_random(law, d, growth_of(s));
    case BoundKind::BerryEsseenPoisson:
      expect_law(s, {LawKind::Poisson});
      return bound_be_poisson(d, law.lambda());
    case BoundKind::MixedPoisson:
      expect_law(s, {LawKind::Poisson, LawKind::Geometric, LawKind::NegativeBinomial, LawKind::PoissonInverseGamma});
      return bound_mixed_poisson(d, *law.mixing());
    case BoundKind::Geometric:
      expect_law(s, {LawKind::Geometric});
      return bound_geometric(d, law.size());
    case BoundKind::NegativeBinomial:
      expect_law(s, {LawKind::NegativeBinomial});
      return bound_negative_binomial(d, law.size(), law.r());
    case BoundKind::Sichel:
      expect_law(s, {LawKind::PoissonInverseGamma});
      return bound_sichel(d, law.size(), law.r());
  }
  throw UsageError("unhandled bound kind");
}

}  // namespace

std::string to_string(Method m) { return m == Method::Exact ? "exact" : "montecarlo"; }

BoundReport compute_bound(const Scenario& s) {
  BoundReport r = dispatch(s);
  if (s.constant_override) {
    const double c = *s.constant_override;
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant override must be positive");
    r.bound_value *= c / r.constant_used;
    r.constant_used = c;
  }
  return r;
}

VerificationReport verify_bound(const Scenario& s) {
  VerificationReport rep;
  rep.scenario_id = s.id;
  rep.method = s.method;
  rep.bound = compute_bound(s);
  const LimitLaw limit = rep.bound.limit_law;
  const auto cdf = [&limit](double x) { return limit.cdf(x); };
  if (s.method == Method::Exact) {
    const ExactSum sum = exact_random_sum(s.summand, s.law, s.exact);
    rep.measured_delta = kolmogorov_distance_exact(sum.law, cdf, rep.bound.normalization);
    rep.mass_deficit = sum.mass_deficit;
    rep.pass = rep.measured_delta + rep.mass_deficit <= rep.bound.bound_value;
  } else {
    rep.replications = s.replications;
    rep.delta = s.delta;
    rep.seed = s.seed;
    rep.dkw_margin = dkw_margin(s.replications, s.delta);
    const auto sample = sample_random_sum(s.summand, s.law, s.seed, s.replications, s.threads);
    rep.measured_delta = empirical_kolmogorov_distance(sample, cdf, rep.bound.normalization);
    rep.pass = rep.measured_delta <= rep.bound.bound_value + rep.dkw_margin;
  }
  return rep;
}

}  // namespace rsbound
