#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "generators.hpp"
#include "rsbound/bounds.hpp"
#include "rsbound/counting.hpp"
#include "rsbound/errors.hpp"
#include "rsbound/lattice.hpp"
#include "rsbound/montecarlo.hpp"
#include "rsbound/specfun.hpp"
#include "rsbound/verify.hpp"

using namespace rsbound;

namespace {

SummandDistribution three_atom() { return SummandDistribution::lattice({{-1, 0.25}, {0, 0.5}, {1, 0.25}}); }

double truncated_mean(const CountingLaw& law) {
  const auto table = law.pmf_table(1e-14);
  double m = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) m += static_cast<double>(k) * table[k];
  return m;
}

double phi(double x) { return std_normal_cdf(x); }

}  // namespace

TEST(Counting, GeometricPmf) {
  const auto g = CountingLaw::geometric(1.0);
  for (int k = 0; k < 40; ++k) EXPECT_NEAR(g.pmf(k), std::ldexp(1.0, -(k + 1)), 1e-16);
  EXPECT_NEAR(g.tail(3), 1.0 / 16.0, 1e-15);
}

TEST(Counting, NegativeBinomialShapeOneIsGeometric) {
  for (double n : {0.4, 3.0, 25.0}) {
    const auto nb = CountingLaw::negative_binomial(1.0, n);
    const auto g = CountingLaw::geometric(n);
    for (int k = 0; k <= 50; ++k) EXPECT_NEAR(nb.pmf(k), g.pmf(k), 1e-12);
  }
}

TEST(Counting, PoissonAndBinomial) {
  EXPECT_NEAR(CountingLaw::poisson(2.5).pmf(0), std::exp(-2.5), 1e-16);
  EXPECT_NEAR(CountingLaw::binomial(2, 1.0).pmf(2), 1.0, 1e-16);
  const std::vector<double> p = {0.2, 0.7, 0.5};
  const auto pb = poisson_binomial_pmf(p);
  ASSERT_EQ(pb.size(), 4u);
  EXPECT_NEAR(pb[0], 0.8 * 0.3 * 0.5, 1e-16);
  EXPECT_NEAR(pb[3], 0.2 * 0.7 * 0.5, 1e-16);
  EXPECT_NEAR(std::accumulate(pb.begin(), pb.end(), 0.0), 1.0, 1e-15);
  EXPECT_THROW(CountingLaw::poisson(-1.0), DomainError);
  EXPECT_THROW(CountingLaw::binomial(3, 0.0), DomainError);
}

TEST(Counting, PoissonInverseGammaRoutesAgree) {
  const auto table = pig_pmf_bessel(4.0, 50.0, 80);
  EXPECT_NEAR(table[0], 0.0010754908503466384, 1e-15);
  EXPECT_NEAR(table[1], 0.004662193363456396, 1e-15);
  EXPECT_NEAR(table[5], 0.03548528679244621, 1e-14);
  EXPECT_NEAR(table[25], 0.014959758753408272, 1e-14);
  EXPECT_NEAR(table[60], 0.001966558365197893, 1e-14);
  EXPECT_NEAR(pig_pmf_bessel(2.5, 3.0, 5)[3], 0.09715745897686464, 1e-14);
  for (double r : {2.5, 4.0, 9.0}) {
    for (double n : {0.5, 6.0, 50.0}) {
      const auto b = pig_pmf_bessel(r, n, 60);
      for (int k : {0, 1, 2, 7, 30, 60}) {
        EXPECT_NEAR(b[k], pig_pmf_quadrature(r, n, k), 1e-10) << "r=" << r << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Counting, Means) {
  EXPECT_NEAR(truncated_mean(CountingLaw::geometric(7.0)), 7.0, 1e-9);
  EXPECT_NEAR(truncated_mean(CountingLaw::negative_binomial(2.5, 4.0)), 10.0, 1e-9);
  EXPECT_NEAR(CountingLaw::negative_binomial(2.5, 4.0).mean(), 10.0, 1e-15);
  EXPECT_NEAR(truncated_mean(CountingLaw::poisson_inverse_gamma(6.0, 20.0)), 20.0 / 4.0, 1e-6);
  EXPECT_FALSE(CountingLaw::poisson_inverse_gamma(2.0, 20.0).has_mean());
  EXPECT_THROW(CountingLaw::poisson_inverse_gamma(1.5, 20.0).mean(), DomainError);
}

TEST(Counting, TruncationPoint) {
  for (const auto& law : {CountingLaw::poisson(30.0), CountingLaw::geometric(12.0),
                          CountingLaw::negative_binomial(3.0, 5.0), CountingLaw::poisson_inverse_gamma(5.0, 10.0),
                          CountingLaw::binomial(40, 0.3)}) {
    const int K = law.truncation_point(1e-12);
    EXPECT_LE(law.tail(K), 1e-12) << law.label();
    if (K > 0) {
      EXPECT_GT(law.tail(K - 1), 1e-12) << law.label();
    }
    const auto table = law.pmf_table(1e-12);
    EXPECT_NEAR(std::accumulate(table.begin(), table.end(), 0.0), 1.0, 1e-11);
  }
  EXPECT_THROW(CountingLaw::poisson_inverse_gamma(2.1, 1e6).truncation_point(1e-12, 1000), ResourceError);
}

TEST(ExactSums, DeterministicConvolution) {
  const auto r = exact_random_sum(SummandDistribution::rademacher(), CountingLaw::deterministic(2));
  EXPECT_NEAR(r.law.mass_at(-2.0), 0.25, 1e-15);
  EXPECT_NEAR(r.law.mass_at(0.0), 0.5, 1e-15);
  EXPECT_NEAR(r.law.mass_at(2.0), 0.25, 1e-15);
  EXPECT_EQ(r.law.mass_at(1.0), 0.0);
  const auto b = exact_random_sum(SummandDistribution::rademacher(), CountingLaw::binomial(2, 1.0));
  ASSERT_EQ(b.law.masses.size(), r.law.masses.size());
  for (std::size_t i = 0; i < b.law.masses.size(); ++i) EXPECT_NEAR(b.law.masses[i], r.law.masses[i], 1e-15);
}

TEST(ExactSums, PoissonRademacherAtZero) {
  const auto r = exact_random_sum(SummandDistribution::rademacher(), CountingLaw::poisson(1.0));
  // Direct sum: k = 2j even, P(k Rademachers sum to 0) = C(2j, j) / 4^j.
  double direct = 0.0;
  for (int j = 0; j < 30; ++j) {
    direct += std::exp(-1.0 - std::lgamma(2.0 * j + 1.0)) * std::exp(std::lgamma(2.0 * j + 1.0) -
                                                                       2.0 * std::lgamma(j + 1.0) - j * std::log(4.0));
  }
  EXPECT_NEAR(r.law.mass_at(0.0), direct, 1e-13);
  EXPECT_NEAR(r.law.mass_at(0.0), 0.4657596075936404, 1e-13);
  EXPECT_GE(r.law.mass_at(0.0), std::exp(-1.0));
  EXPECT_LE(r.mass_deficit, 1e-12);
  EXPECT_NEAR(r.law.total_mass() + r.mass_deficit, 1.0, 1e-13);
}

TEST(ExactSums, MassDeficitWithinTolerance) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = gen::random_lattice(rng, 5, 3, true);
    for (const auto& law : {CountingLaw::poisson(6.0), CountingLaw::geometric(4.0),
                            CountingLaw::negative_binomial(2.0, 3.0)}) {
      ExactSumOptions opt;
      opt.tail_tol = 1e-10;
      const auto r = exact_random_sum(d, law, opt);
      EXPECT_LE(r.mass_deficit, 1e-10);
      EXPECT_NEAR(r.law.total_mass(), 1.0 - r.mass_deficit, 1e-12);
    }
  }
}

TEST(ExactSums, CellBudget) {
  ExactSumOptions opt;
  opt.cell_budget = 1000;
  try {
    exact_random_sum(SummandDistribution::rademacher(), CountingLaw::poisson(400.0), opt);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("Monte Carlo"), std::string::npos);
  }
  EXPECT_THROW(exact_random_sum(SummandDistribution::uniform(1.0), CountingLaw::poisson(2.0)), UnsupportedError);
}

TEST(ExactSums, NonIntegerLattice) {
  const auto d = SummandDistribution::lattice({{-0.5, 0.6}, {0.75, 0.4}});
  const auto lat = integer_lattice(d);
  EXPECT_NEAR(lat.step, 0.25, 1e-15);
  const auto r = exact_random_sum(d, CountingLaw::deterministic(2));
  EXPECT_NEAR(r.law.mass_at(-1.0), 0.36, 1e-15);
  EXPECT_NEAR(r.law.mass_at(0.25), 0.48, 1e-15);
  EXPECT_NEAR(r.law.mass_at(1.5), 0.16, 1e-15);
}

TEST(Lemma6, HandExample) {
  const std::vector<double> p = {0.3};
  EXPECT_LE(lemma6_check(SummandDistribution::rademacher(), p), 1e-15);
  const auto r = exact_random_sum(SummandDistribution::rademacher(), CountingLaw::poisson_binomial(p));
  EXPECT_NEAR(r.law.mass_at(-1.0), 0.15, 1e-15);
  EXPECT_NEAR(r.law.mass_at(0.0), 0.7, 1e-15);
  EXPECT_NEAR(r.law.mass_at(1.0), 0.15, 1e-15);
}

TEST(Lemma6, RandomisedCases) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> nd(1, 8);
  for (int rep = 0; rep < 100; ++rep) {
    const auto d = gen::random_lattice(rng, 5, 3 + rep % 3, true);
    const auto p = gen::random_probabilities(rng, nd(rng));
    EXPECT_LE(lemma6_check(d, p), 1e-12);
  }
  const std::vector<double> ones(5, 1.0);
  EXPECT_LE(lemma6_check(three_atom(), ones), 1e-15);
  const std::vector<double> many(13, 0.5);
  EXPECT_THROW(lemma6_check(three_atom(), many), UsageError);
}

TEST(Kolmogorov, ExactExamples) {
  const auto four = exact_random_sum(SummandDistribution::rademacher(), CountingLaw::deterministic(4));
  EXPECT_NEAR(kolmogorov_distance_exact(four.law, phi, 2.0), 0.1875, 1e-15);
  const auto one = exact_random_sum(SummandDistribution::rademacher(), CountingLaw::deterministic(1));
  EXPECT_NEAR(kolmogorov_distance_exact(one.law, phi, 1.0), 0.3413447460685429, 1e-15);

  // Fine discretisation of the normal law: distance within one cell mass.
  LatticeDistribution fine;
  fine.origin = -8.0;
  fine.step = 1e-3;
  const int cells = 16001;
  for (int i = 0; i < cells; ++i) {
    const double x = fine.value(i);
    fine.masses.push_back(phi(x + 0.5e-3) - phi(x - 0.5e-3));
  }
  EXPECT_LE(kolmogorov_distance_exact(fine, phi, 1.0), 0.5e-3 * 0.4 + 1e-12);
}

TEST(MonteCarlo, Reproducible) {
  const auto d = three_atom();
  const auto law = CountingLaw::negative_binomial(2.0, 5.0);
  const auto a = sample_random_sum(d, law, 7, 200'000, 1);
  const auto b = sample_random_sum(d, law, 7, 200'000, 4);
  const auto c = sample_random_sum(d, law, 7, 200'000, 0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  const auto prefix = sample_random_sum(d, law, 7, 70'000, 3);
  EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), a.begin()));
  EXPECT_NE(sample_random_sum(d, law, 8, 1000, 1), std::vector<double>(a.begin(), a.begin() + 1000));
  EXPECT_NE(block_seed(7, 0), block_seed(7, 1));
}

TEST(MonteCarlo, FullSumsForBinomialOne) {
  const auto s = sample_random_sum(SummandDistribution::rademacher(), CountingLaw::binomial(5, 1.0), 3, 5000, 1);
  for (double v : s) EXPECT_TRUE(v == -5 || v == -3 || v == -1 || v == 1 || v == 3 || v == 5) << v;
}

TEST(MonteCarlo, PoissonMoments) {
  const double lambda = 6.0;
  const std::size_t m = 400'000;
  for (const auto& d : {three_atom(), SummandDistribution::uniform(2.0)}) {
    const auto s = sample_random_sum(d, CountingLaw::poisson(lambda), 99, m);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m - 1);
    const double target = lambda * d.variance();
    EXPECT_LE(std::fabs(mean), 4.0 * std::sqrt(target / m));
    // Var of the sample variance is about (E S^4 - target^2) / m; 5% is ample here.
    EXPECT_NEAR(var, target, 0.02 * target);
  }
}

TEST(MonteCarlo, EmpiricalDistance) {
  const std::vector<double> sample = {-1.0, 1.0};
  EXPECT_NEAR(empirical_kolmogorov_distance(sample, phi, 1.0), 0.3413447460685429, 1e-15);
  EXPECT_NEAR(dkw_margin(1'000'000, 0.01), std::sqrt(std::log(200.0) / 2e6), 1e-16);
  EXPECT_NEAR(dkw_margin(1'000'000, 0.01), 0.00163, 1e-5);
}

TEST(MonteCarlo, AgreesWithExactWithinMargin) {
  const auto d = SummandDistribution::rademacher();
  const auto law = CountingLaw::poisson(9.0);
  const auto exact = exact_random_sum(d, law);
  const double exact_delta = kolmogorov_distance_exact(exact.law, phi, 3.0);
  const std::size_t m = 20'000;
  const double margin = dkw_margin(m, 0.01);
  int misses = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const double emp = empirical_kolmogorov_distance(sample_random_sum(d, law, seed, m, 1), phi, 3.0);
    if (std::fabs(emp - exact_delta) > margin) ++misses;
  }
  EXPECT_LE(misses, 1);
}

TEST(Verify, ExactExamples) {
  Scenario four("rad4", SummandDistribution::rademacher(), CountingLaw::deterministic(4), BoundKind::FixedN);
  four.variant = Variant::IidGeneral;
  const auto r4 = verify_bound(four);
  EXPECT_NEAR(r4.measured_delta, 0.1875, 1e-15);
  EXPECT_NEAR(r4.bound.bound_value, 0.2345, 1e-12);
  EXPECT_TRUE(r4.pass);
  EXPECT_EQ(r4.dkw_margin, 0.0);

  Scenario pois("pois9", SummandDistribution::rademacher(), CountingLaw::poisson(9.0), BoundKind::Poisson);
  const auto r9 = verify_bound(pois);
  EXPECT_LE(r9.measured_delta, 0.6182);
  EXPECT_TRUE(r9.pass);
  EXPECT_LE(r9.mass_deficit, 1e-12);

  Scenario tight = four;
  tight.constant_override = 0.01;
  EXPECT_FALSE(verify_bound(tight).pass);
}

TEST(Verify, MonteCarloGeometric) {
  Scenario s("geo50", SummandDistribution::rademacher(), CountingLaw::geometric(50.0), BoundKind::Geometric);
  s.method = Method::MonteCarlo;
  s.seed = 101;
  const auto r = verify_bound(s);
  EXPECT_NEAR(r.dkw_margin, 0.001627623631, 1e-11);
  EXPECT_EQ(r.replications, 1'000'000u);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.pass, r.measured_delta <= r.bound.bound_value + r.dkw_margin);
}

TEST(Verify, MismatchedBoundRejected) {
  Scenario s("bad", SummandDistribution::rademacher(), CountingLaw::poisson(4.0), BoundKind::Geometric);
  EXPECT_THROW(verify_bound(s), UsageError);
}
