#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "generators.hpp"
#include "rsbound/bounds.hpp"
#include "rsbound/errors.hpp"
#include "rsbound/functionals.hpp"
#include "rsbound/specfun.hpp"

using namespace rsbound;

namespace {

SummandDistribution three_atom() { return SummandDistribution::lattice({{-1, 0.25}, {0, 0.5}, {1, 0.25}}); }

SummandDistribution skewed() { return SummandDistribution::lattice({{-1, 2.0 / 3.0}, {2, 1.0 / 3.0}}); }

}  // namespace

TEST(Bounds, KindNamesRoundTrip) {
  for (int k = 0; k <= static_cast<int>(BoundKind::Sichel); ++k) {
    const auto kind = static_cast<BoundKind>(k);
    EXPECT_EQ(bound_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(bound_kind_from_string("theorem_1"), UsageError);
}

TEST(Bounds, FixedNRademacher) {
  const auto d = SummandDistribution::rademacher();
  const auto one = bound_fixed_n(Variant::IidGeneral, d, 1);
  EXPECT_EQ(one.gamma, 0.0);
  EXPECT_NEAR(one.bound_value, 1.8546, 5e-5);
  EXPECT_NEAR(one.bound_value, c_gamma(Variant::IidGeneral, 0.0), 1e-15);

  const auto four = bound_fixed_n(Variant::IidGeneral, d, 4);
  EXPECT_TRUE(std::isinf(four.gamma));
  EXPECT_NEAR(four.bound_value, 0.2345, 1e-12);
  EXPECT_EQ(four.constant_used, 0.4690);

  EXPECT_NEAR(bound_fixed_n(Variant::IidSymmetric, d, 4).bound_value, 0.2345, 1e-12);
  EXPECT_NEAR(bound_fixed_n(Variant::General, d, 4).bound_value, 0.5583 * 0.5, 1e-12);
}

TEST(Bounds, FixedNFormula) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const auto d = gen::random_lattice(rng);
    for (int n : {1, 3, 10}) {
      const auto f = functionals_iid(d, n, 1.0);
      ASSERT_TRUE(f.L > 0.0 || f.M > 0.0);
      const auto r = bound_fixed_n(Variant::IidGeneral, d, n);
      const double expected = std::isinf(f.gamma) ? 0.4690 * f.M
                                                  : (1.0 + f.gamma) * c_gamma(Variant::IidGeneral, f.gamma) * f.L;
      EXPECT_NEAR(r.bound_value, expected, 1e-12 * (1.0 + expected));
      EXPECT_NEAR(r.L, f.L, 1e-15);
      EXPECT_NEAR(r.M, f.M, 1e-15);
    }
  }
}

TEST(Bounds, FixedNHeteroMatchesIid) {
  const auto d = skewed();
  const std::vector<SummandDistribution> ds(6, d);
  EXPECT_NEAR(bound_fixed_n(Variant::General, ds).bound_value, bound_fixed_n(Variant::General, d, 6).bound_value,
              1e-13);
  EXPECT_THROW(bound_fixed_n(Variant::IidGeneral, ds), UsageError);
  EXPECT_THROW(bound_fixed_n(Variant::IidSymmetric, ds), UsageError);
}

TEST(Bounds, SymmetryPrecondition) {
  EXPECT_THROW(bound_fixed_n(Variant::Symmetric, skewed(), 3), PreconditionError);
  EXPECT_THROW(bound_fixed_n(Variant::IidSymmetric, skewed(), 3), PreconditionError);
  EXPECT_NO_THROW(bound_fixed_n(Variant::IidSymmetric, three_atom(), 3));
  EXPECT_NO_THROW(bound_fixed_n(Variant::General, skewed(), 3));
}

TEST(Bounds, Osipov) {
  const auto d = SummandDistribution::rademacher();
  EXPECT_NEAR(bound_osipov(d, 4, 1.0).bound_value, 1.8627 * 0.5, 1e-14);
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 30; ++rep) {
    const auto x = gen::random_lattice(rng);
    const auto f = functionals_iid(x, 5, 1.0);
    const double at_one = bound_osipov(x, 5, 1.0).bound_value;
    EXPECT_NEAR(at_one, 1.8627 * (f.L + f.M), 1e-13);
    for (double eps : {0.1, 0.5, 2.0, 7.0}) EXPECT_LE(at_one, bound_osipov(x, 5, eps).bound_value + 1e-12);
  }
}

TEST(Bounds, GrowthFunctionBounds) {
  const auto d = SummandDistribution::rademacher();
  EXPECT_NEAR(bound_growth(d, 4, GrowthFunction::abs()).bound_value, 0.9273, 1e-12);
  // min(|x|, 1): E X^2 min(|X|, 1) = 1 and g(2) = 1.
  EXPECT_NEAR(bound_growth(d, 4, GrowthFunction::min_abs(1.0)).bound_value, 1.8546, 1e-12);
  const auto u = SummandDistribution::uniform(1.0);
  const double third = 0.25;  // E|U|^3 for U uniform on [-1, 1]
  EXPECT_NEAR(bound_growth(u, 9, GrowthFunction::abs()).bound_value,
              1.8546 * third / (u.variance() * std::sqrt(9.0 * u.variance())), 1e-10);
  const std::vector<SummandDistribution> ds(4, d);
  EXPECT_NEAR(bound_growth(ds, GrowthFunction::abs()).bound_value, 1.8627 * 0.5, 1e-12);
  EXPECT_THROW(bound_growth(d, 4, GrowthFunction::square()), PreconditionError);
  EXPECT_THROW(bound_growth(SummandDistribution::pareto(2.5, 1.0), 4, GrowthFunction::power(0.8)), UnboundedError);
  EXPECT_NO_THROW(bound_growth(SummandDistribution::pareto(2.5, 1.0), 4, GrowthFunction::power(0.3)));
}

TEST(Bounds, PoissonBinomialFamily) {
  const auto d = SummandDistribution::rademacher();
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_NEAR(bound_poisson_binomial(d, half).bound_value, 1.8627, 1e-12);
  const std::vector<double> nine(9, 1.0);
  EXPECT_NEAR(bound_poisson_binomial(d, nine).bound_value, 1.8627 / 3.0, 1e-12);
  EXPECT_NEAR(bound_poisson_binomial(d, nine).bound_value, 0.6209, 1e-4);
  EXPECT_NEAR(bound_poisson(d, 9.0).bound_value, 0.6182, 1e-4);
  EXPECT_NEAR(bound_poisson(d, 9.0).bound_value, 1.8546 / 3.0, 1e-12);
  EXPECT_NEAR(bound_poisson(d, 0.25).bound_value, 1.8546, 1e-12);
  EXPECT_NEAR(bound_poisson(d, 9.0).normalization, 3.0, 1e-15);

  const std::vector<double> bad = {0.5, 0.0};
  EXPECT_THROW(bound_poisson_binomial(d, bad), DomainError);
  EXPECT_THROW(bound_binomial(d, 4, 1.5), DomainError);
  EXPECT_THROW(bound_poisson(d, 0.0), DomainError);
}

TEST(Bounds, AllOnesReducesToTruncatedMoment) {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 30; ++rep) {
    const auto d = gen::random_lattice(rng);
    for (int n : {1, 4, 13}) {
      const std::vector<double> ones(n, 1.0);
      const double t = d.sigma() * std::sqrt(static_cast<double>(n));
      const double expected = 1.8627 / d.variance() * truncated_min_moment(d, t);
      EXPECT_NEAR(bound_poisson_binomial(d, ones).bound_value, expected, 1e-13 * (1 + expected));
      EXPECT_NEAR(bound_binomial(d, n, 1.0).bound_value, expected * 1.8546 / 1.8627, 1e-13 * (1 + expected));
    }
  }
}

TEST(Bounds, GrowthRandom) {
  const auto d = SummandDistribution::rademacher();
  EXPECT_NEAR(bound_growth_random(CountingLaw::poisson(4.0), d, GrowthFunction::min_abs(2.0)).bound_value, 0.9273,
              1e-12);
  const std::vector<double> ones(4, 1.0);
  EXPECT_NEAR(bound_growth_random(CountingLaw::poisson_binomial(ones), d, GrowthFunction::abs()).bound_value,
              bound_growth(std::vector<SummandDistribution>(4, d), GrowthFunction::abs()).bound_value, 1e-14);
  EXPECT_NEAR(bound_growth_random(CountingLaw::binomial(8, 0.5), d, GrowthFunction::abs()).bound_value,
              bound_growth(d, 4, GrowthFunction::abs()).bound_value, 1e-14);
  EXPECT_THROW(bound_growth_random(CountingLaw::geometric(3.0), d, GrowthFunction::abs()), UsageError);
}

TEST(Bounds, BerryEsseenPoisson) {
  const auto d = SummandDistribution::rademacher();
  EXPECT_NEAR(bound_be_poisson(d, 100.0).bound_value, 0.03031, 1e-15);
  const auto u = SummandDistribution::uniform(2.0);
  EXPECT_NEAR(bound_be_poisson(u, 4.0 * 7.0).bound_value, 0.5 * bound_be_poisson(u, 7.0).bound_value, 1e-15);
  try {
    bound_be_poisson(SummandDistribution::pareto(2.5, 1.0), 10.0);
    FAIL() << "expected UnboundedError";
  } catch (const UnboundedError& e) {
    EXPECT_NE(std::string(e.what()).find("third moment infinite"), std::string::npos);
  }
}

TEST(Bounds, GeometricFrozenAndClosedForm) {
  const auto d = SummandDistribution::rademacher();
  const auto r = bound_geometric(d, 1.0);
  EXPECT_NEAR(r.bound_value, 1.689403626864959, 1e-12);
  EXPECT_NEAR(r.bound_value, 1.8546 * (lower_inc_gamma(1.0, 1.0) + upper_inc_gamma(0.5, 1.0)), 1e-12);
  EXPECT_EQ(r.limit_law.kind, LimitLaw::Kind::Laplace);
  EXPECT_NEAR(bound_geometric(d, 16.0).normalization, 4.0, 1e-15);
  EXPECT_LT(bound_geometric(d, 1e6).bound_value, bound_geometric(d, 1e2).bound_value);
}

TEST(Bounds, NegativeBinomial) {
  const auto d = SummandDistribution::rademacher();
  const auto r = bound_negative_binomial(d, 4.0, 2.0);
  EXPECT_NEAR(r.bound_value, 0.8042884184415326, 1e-12);
  // Direct incomplete-gamma form at z = x^2 / (n sigma^2) = 1/4.
  const double direct = 1.8546 / gamma_fn(2.0) * (lower_inc_gamma(2.0, 0.25) + upper_inc_gamma(1.5, 0.25) / 2.0);
  EXPECT_NEAR(r.bound_value, direct, 1e-12);
  EXPECT_EQ(r.limit_law.kind, LimitLaw::Kind::VarianceGamma);
  EXPECT_EQ(r.limit_law.r, 2.0);
  for (double n : {0.5, 3.0, 40.0}) {
    EXPECT_NEAR(bound_negative_binomial(d, n, 1.0).bound_value, bound_geometric(d, n).bound_value, 1e-12);
  }
  EXPECT_THROW(bound_negative_binomial(d, 4.0, 0.5), DomainError);
  EXPECT_THROW(bound_negative_binomial(d, 4.0, 0.2), DomainError);
}

TEST(Bounds, Sichel) {
  const auto d = SummandDistribution::rademacher();
  const auto r = bound_sichel(d, 2.0, 3.0);
  EXPECT_NEAR(r.bound_value, 1.6145607479745615, 1e-12);
  EXPECT_NEAR(bound_sichel(d, 8.0, 5.0).bound_value, 1.352698008109143, 1e-12);
  EXPECT_EQ(r.limit_law.kind, LimitLaw::Kind::Student);
  EXPECT_NEAR(r.normalization, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_THROW(bound_sichel(d, 2.0, 2.0), DomainError);
  EXPECT_THROW(bound_sichel(d, 2.0, 1.5), DomainError);

  // An atom at zero contributes nothing: compare with the same law rescaled
  // so only the nonzero atoms carry the formula.
  const auto with_zero = three_atom();
  const double direct = [&] {
    const double s2 = with_zero.variance();
    const double w = 5.0 * s2 / 2.0;
    const double second = 0.5 * gamma_q(2.0, w);
    const double third = 0.5 * std::exp(std::lgamma(2.5) - std::lgamma(2.0)) * gamma_p(2.5, w) *
                         std::sqrt(2.0 / 5.0) / std::sqrt(s2);
    return 1.8546 / s2 * (second + third);
  }();
  EXPECT_NEAR(bound_sichel(with_zero, 5.0, 4.0).bound_value, direct, 1e-12);
}

TEST(Bounds, MixedPoissonConsistency) {
  std::mt19937_64 rng(34);
  for (int rep = 0; rep < 10; ++rep) {
    const auto d = gen::random_lattice(rng);
    for (double n : {1.0, 7.5, 300.0}) {
      EXPECT_NEAR(bound_mixed_poisson(d, MixingLaw::exponential(n)).bound_value, bound_geometric(d, n).bound_value,
                  1e-10);
      for (double r : {0.8, 2.0, 5.5}) {
        EXPECT_NEAR(bound_mixed_poisson(d, MixingLaw::gamma(r, n)).bound_value,
                    bound_negative_binomial(d, n, r).bound_value, 1e-10);
      }
      EXPECT_NEAR(bound_mixed_poisson(d, MixingLaw::degenerate(n)).bound_value, bound_poisson(d, n).bound_value,
                  1e-12);
    }
  }
  EXPECT_THROW(bound_mixed_poisson(SummandDistribution::rademacher(), MixingLaw::inverse_gamma(1.0, 3.0)),
               DomainError);
}

TEST(Bounds, ContinuousFamiliesMatchQuadratureOfG) {
  // G_n(x) for an exponential intensity, integrated against the uniform density.
  const auto u = SummandDistribution::uniform(1.5);
  const double n = 3.0;
  const double sigma = u.sigma();
  double acc = 0.0;
  constexpr int kPanels = 20000;
  for (int i = 0; i < kPanels; ++i) {
    const double x = 1.5 * (i + 0.5) / kPanels;
    const double z = x * x / (n * sigma * sigma);
    const double g = gamma_p(1.0, z) + x / (sigma * std::sqrt(n)) * upper_inc_gamma(0.5, z);
    acc += x * x * g / 1.5 * (1.5 / kPanels);
  }
  EXPECT_NEAR(bound_geometric(u, n).bound_value, 1.8546 * acc / (sigma * sigma), 1e-8);
  EXPECT_NEAR(mixed_poisson_g(MixingLaw::exponential(n), sigma, 0.0), 0.0, 1e-15);
  EXPECT_LE(mixed_poisson_g(MixingLaw::exponential(n), sigma, 100.0), 1.0);
}

TEST(Bounds, NonincreasingInSize) {
  const auto d = skewed();
  double prev[7];
  std::fill(std::begin(prev), std::end(prev), std::numeric_limits<double>::infinity());
  for (int i = 0; i < 30; ++i) {
    const double n = std::pow(1.5, i);
    const double now[7] = {
        bound_poisson(d, n).bound_value,
        bound_binomial(d, static_cast<int>(std::ceil(2.0 * n)), 0.5).bound_value,
        bound_geometric(d, n).bound_value,
        bound_negative_binomial(d, n, 2.5).bound_value,
        bound_sichel(d, n, 3.5).bound_value,
        bound_be_poisson(d, n).bound_value,
        bound_growth_random(CountingLaw::poisson(n), d, GrowthFunction::abs()).bound_value,
    };
    for (int k = 0; k < 7; ++k) {
      EXPECT_LE(now[k], prev[k] * (1 + 1e-12)) << "bound " << k << " n=" << n;
      prev[k] = now[k];
    }
  }
}

TEST(Bounds, ScaleInvariance) {
  for (const auto& d : {skewed(), SummandDistribution::uniform(1.0), SummandDistribution::pareto(3.5, 1.0)}) {
    const std::vector<std::function<double(const SummandDistribution&)>> evals = {
        [](const SummandDistribution& x) { return bound_fixed_n(Variant::General, x, 5).bound_value; },
        [](const SummandDistribution& x) { return bound_osipov(x, 5, 0.7).bound_value; },
        [](const SummandDistribution& x) { return bound_poisson(x, 6.0).bound_value; },
        [](const SummandDistribution& x) { return bound_binomial(x, 9, 0.3).bound_value; },
        [](const SummandDistribution& x) { return bound_be_poisson(x, 6.0).bound_value; },
        [](const SummandDistribution& x) { return bound_geometric(x, 6.0).bound_value; },
        [](const SummandDistribution& x) { return bound_negative_binomial(x, 6.0, 1.7).bound_value; },
        [](const SummandDistribution& x) { return bound_sichel(x, 6.0, 4.0).bound_value; },
        [](const SummandDistribution& x) { return bound_growth(x, 5, GrowthFunction::abs()).bound_value; },
    };
    for (double c : {0.5, 3.0}) {
      const auto scaled = d.scaled(c);
      for (std::size_t k = 0; k < evals.size(); ++k) {
        const double a = evals[k](d);
        const double b = evals[k](scaled);
        EXPECT_NEAR(a, b, 1e-9 * (1 + a)) << d.label() << " c=" << c << " bound " << k;
      }
    }
  }
}

TEST(Bounds, TotalVariationBinomialPoisson) {
  const double tv = tv_binomial_poisson(10, 0.1);
  EXPECT_NEAR(tv, 0.058623143485673035, 1e-13);
  EXPECT_LE(tv, prokhorov_bound(10, 0.1));
  EXPECT_NEAR(prokhorov_bound(10, 0.1), 0.2, 1e-15);
  EXPECT_NEAR(tv_binomial_poisson(1, 1.0), 2.0 - 2.0 / std::exp(1.0), 1e-14);
  EXPECT_LT(tv_binomial_poisson(1000, 0.001), tv_binomial_poisson(10, 0.1) / 50.0);
  for (int n : {2, 20, 200}) {
    for (double p : {0.01, 0.3, 0.9}) EXPECT_LE(tv_binomial_poisson(n, p), prokhorov_bound(n, p) + 1e-15);
  }
}
