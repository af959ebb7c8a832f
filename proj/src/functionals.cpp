#include "rsbound/functionals.hpp"

#include <cmath>
#include <limits>

#include "rsbound/constants.hpp"
#include "rsbound/errors.hpp"

namespace rsbound {
namespace {

constexpr double kSlack = 1e-12;

double ratio(double M, double L) { return L > 0.0 ? M / L : std::numeric_limits<double>::infinity(); }

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be positive and finite");
}

}  // namespace

FunctionalValues functionals_iid(const SummandDistribution& d, int n, double eps) {
  if (n < 1) throw DomainError("n must be at least 1");
  require_eps(eps);
  const double sigma2 = d.variance();
  const double B = std::sqrt(n * sigma2);
  const double t = eps * B;
  FunctionalValues v;
  v.n = n;
  v.epsilon = eps;
  v.B_n = B;
  v.L = trunc_second_moment_tail(d, t) / sigma2;
  v.M = n * trunc_third_abs_moment_core(d, t) / (B * B * B);
  v.gamma = ratio(v.M, v.L);
  return v;
}

FunctionalValues functionals_hetero(std::span<const SummandDistribution> ds, double eps) {
  if (ds.empty()) throw UsageError("functionals: empty summand list");
  require_eps(eps);
  double B2 = 0.0;
  for (const auto& d : ds) B2 += d.variance();
  const double B = std::sqrt(B2);
  const double t = eps * B;
  FunctionalValues v;
  v.n = static_cast<int>(ds.size());
  v.epsilon = eps;
  v.B_n = B;
  double tail = 0.0;
  double core = 0.0;
  for (const auto& d : ds) {
    tail += trunc_second_moment_tail(d, t);
    core += trunc_third_abs_moment_core(d, t);
  }
  v.L = tail / B2;
  v.M = core / (B2 * B);
  v.gamma = ratio(v.M, v.L);
  return v;
}

double lemma1_gap(const SummandDistribution& d, int n, double eps) {
  const auto at_eps = functionals_iid(d, n, eps);
  const auto at_one = functionals_iid(d, n, 1.0);
  return (at_eps.L + at_eps.M) - (at_one.L + at_one.M);
}

double lemma1_gap(std::span<const SummandDistribution> ds, double eps) {
  const auto at_eps = functionals_hetero(ds, eps);
  const auto at_one = functionals_hetero(ds, 1.0);
  return (at_eps.L + at_eps.M) - (at_one.L + at_one.M);
}

Lemma2Result lemma2_check(std::span<const SummandDistribution> ds, double x, double p) {
  if (ds.empty()) throw UsageError("lemma2_check: empty summand list");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("lemma2_check: x must be nonnegative");
  if (!(p >= 1.0 && p <= constants::kZolotarevK)) throw DomainError("lemma2_check: p must lie in [1, K]");
  for (const auto& d : ds) {
    if (!d.is_discrete()) throw UnsupportedError("lemma2_check: only discrete summands can be enumerated");
  }

  const auto f = functionals_hetero(ds, 1.0 + x);
  const double B = f.B_n;
  const double t = (1.0 + x) * B;

  Lemma2Result r;
  for (const auto& d : ds) {
    // Y = X 1(|X| < t) / B; atoms in the tail collapse onto 0.
    double mean = 0.0;
    double second = 0.0;
    for (const Atom& a : d.atoms()) {
      if (in_tail(std::fabs(a.value), t)) continue;
      const double y = a.value / B;
      mean += a.prob * y;
      second += a.prob * y * y;
    }
    double third = 0.0;
    for (const Atom& a : d.atoms()) {
      const double y = in_tail(std::fabs(a.value), t) ? 0.0 : a.value / B;
      third += a.prob * std::pow(std::fabs(y - mean), 3);
    }
    r.third_moment_sum += third;
    r.second_moment_sum += second;
    r.variance += second - mean * mean;
  }
  r.k_bound = constants::kZolotarevK * f.M;
  r.p_bound = p * f.M + (5.0 - p) * f.L / (1.0 + x);
  r.variance_floor = 1.0 - 2.0 * f.L;
  r.moment_ok = r.third_moment_sum <= std::min(r.k_bound, r.p_bound) + kSlack;
  r.variance_ok = r.variance_floor <= r.variance + kSlack && r.variance <= 1.0 + kSlack;
  return r;
}

}  // namespace rsbound
