#pragma once

// Explicit-constant bounds on the uniform distance between the law of a
// (random) sum and its normal or normal-mixture limit.

#include <span>
#include <string>
#include <vector>

#include "rsbound/constants.hpp"
#include "rsbound/counting.hpp"
#include "rsbound/dists.hpp"
#include "rsbound/limitlaws.hpp"

namespace rsbound {

enum class BoundKind {
  FixedN,              // (1 + gamma) C_v(gamma) L_n(1)
  Lindeberg,           // C [L_n(eps) + M_n(eps)]
  Growth,              // C E X^2 g(X) / (sigma^2 g(B_n))
  PoissonBinomial,
  Binomial,
  Poisson,
  GrowthRandom,        // growth-function form for the three index laws above
  BerryEsseenPoisson,  // 0.3031 E|X|^3 / (sigma^3 sqrt(lambda))
  MixedPoisson,        // C E X^2 G_n(X) / sigma^2
  Geometric,
  NegativeBinomial,
  Sichel,
};

std::string to_string(BoundKind k);
/// Inverse of to_string; UsageError on unknown names.
BoundKind bound_kind_from_string(const std::string& name);

struct BoundReport {
  BoundKind kind = BoundKind::FixedN;
  double bound_value = 0.0;
  double constant_used = 0.0;
  double gamma = 0.0;  // M / L, +inf when L == 0
  double L = 0.0;
  double M = 0.0;
  double normalization = 1.0;  // divisor of the (random) sum
  LimitLaw limit_law = LimitLaw::normal();
};

/// Variants 1 and 3 accept independent, non-identically distributed summands.
BoundReport bound_fixed_n(Variant v, std::span<const SummandDistribution> ds);
/// n i.i.d. copies; every variant.
BoundReport bound_fixed_n(Variant v, const SummandDistribution& d, int n);

BoundReport bound_osipov(const SummandDistribution& d, int n, double eps);
BoundReport bound_osipov(std::span<const SummandDistribution> ds, double eps);

/// Constant 1.8546.
BoundReport bound_growth(const SummandDistribution& d, int n, const GrowthFunction& g);
/// Constant 1.8627.
BoundReport bound_growth(std::span<const SummandDistribution> ds, const GrowthFunction& g);

/// E X^2 min{1, |X| / t}.
double truncated_min_moment(const SummandDistribution& d, double t);

BoundReport bound_poisson_binomial(const SummandDistribution& d, std::span<const double> p);
BoundReport bound_binomial(const SummandDistribution& d, int n, double p);
BoundReport bound_poisson(const SummandDistribution& d, double lambda);

/// law must be Poisson-binomial, binomial or Poisson.
BoundReport bound_growth_random(const CountingLaw& law, const SummandDistribution& d, const GrowthFunction& g);

/// UnboundedError when E|X|^3 is infinite.
BoundReport bound_be_poisson(const SummandDistribution& d, double lambda);

/// G_n(x) = E min{1, |x| / (sigma sqrt(Lambda))}.
double mixed_poisson_g(const MixingLaw& m, double sigma, double x);

/// m is the law of the intensity Lambda_n itself; DomainError when its mean is infinite.
BoundReport bound_mixed_poisson(const SummandDistribution& d, const MixingLaw& m);
BoundReport bound_geometric(const SummandDistribution& d, double n);
/// Requires r > 1/2.
BoundReport bound_negative_binomial(const SummandDistribution& d, double n, double r);
/// Requires r > 2. Normalization sigma sqrt(n / r), Student limit.
BoundReport bound_sichel(const SummandDistribution& d, double n, double r);

/// sum_k |P(Bin(n, p) = k) - P(Pois(np) = k)|.
double tv_binomial_poisson(int n, double p);
/// 2 p min{2, n p}.
double prokhorov_bound(int n, double p);

}  // namespace rsbound
