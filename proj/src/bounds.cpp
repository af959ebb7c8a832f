#include "rsbound/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "rsbound/errors.hpp"
#include "rsbound/functionals.hpp"
#include "rsbound/specfun.hpp"

namespace rsbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<BoundKind, const char*>, 12> kNames = {{
    {BoundKind::FixedN, "fixed_n"},
    {BoundKind::Lindeberg, "lindeberg"},
    {BoundKind::Growth, "growth"},
    {BoundKind::PoissonBinomial, "poisson_binomial"},
    {BoundKind::Binomial, "binomial"},
    {BoundKind::Poisson, "poisson"},
    {BoundKind::GrowthRandom, "growth_random"},
    {BoundKind::BerryEsseenPoisson, "berry_esseen_poisson"},
    {BoundKind::MixedPoisson, "mixed_poisson"},
    {BoundKind::Geometric, "geometric"},
    {BoundKind::NegativeBinomial, "negative_binomial"},
    {BoundKind::Sichel, "sichel"},
}};

double ratio(double M, double L) { return L > 0.0 ? M / L : kInf; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_growth_class(const GrowthFunction& g) {
  const auto grid = default_growth_grid();
  const GrowthCheck check = verify_growth_function(g, grid);
  if (!check.pass) {
    throw PreconditionError("growth function '" + g.label() + "' is not in the admissible class: " +
                            check.violation);
  }
}

double weighted_moment_or_throw(const SummandDistribution& d, const GrowthFunction& g) {
  const double w = weighted_second_moment(d, g);
  if (!std::isfinite(w)) {
    throw UnboundedError("E X^2 g(X) is infinite for " + d.label() + " and g = " + g.label());
  }
  return w;
}

FunctionalValues functionals_of(std::span<const SummandDistribution> ds, double eps) {
  return functionals_hetero(ds, eps);
}

BoundReport from_functionals(BoundKind kind, const FunctionalValues& f, double constant) {
  BoundReport r;
  r.kind = kind;
  r.constant_used = constant;
  r.L = f.L;
  r.M = f.M;
  r.gamma = f.gamma;
  r.normalization = f.B_n;
  r.bound_value = constant * (f.L + f.M);
  return r;
}

BoundReport fixed_n_from(Variant v, const FunctionalValues& f) {
  BoundReport r;
  r.kind = BoundKind::FixedN;
  r.L = f.L;
  r.M = f.M;
  r.gamma = f.gamma;
  r.normalization = f.B_n;
  if (std::isinf(f.gamma)) {
    r.constant_used = traits(v).be_constant;
    r.bound_value = r.constant_used * f.M;
  } else {
    r.constant_used = c_gamma(v, f.gamma);
    r.bound_value = (1.0 + f.gamma) * r.constant_used * f.L;
  }
  return r;
}

void require_symmetric(Variant v, const SummandDistribution& d) {
  if ((v == Variant::Symmetric || v == Variant::IidSymmetric) && !d.is_symmetric()) {
    throw PreconditionError("constant variant " + std::to_string(static_cast<int>(v)) +
                            " needs symmetric summands; " + d.label() + " is not symmetric");
  }
}

// Bound of the form C E X^2 min{1, |X|/(sigma sqrt(theta))} / sigma^2.
BoundReport truncated_bound(BoundKind kind, const SummandDistribution& d, double theta, double constant) {
  const double sigma2 = d.variance();
  const double t = std::sqrt(theta * sigma2);
  BoundReport r;
  r.kind = kind;
  r.constant_used = constant;
  r.L = trunc_second_moment_tail(d, t) / sigma2;
  r.M = trunc_third_abs_moment_core(d, t) / (sigma2 * t);
  r.gamma = ratio(r.M, r.L);
  r.normalization = t;
  r.bound_value = constant * (r.L + r.M);
  return r;
}

BoundReport growth_bound(BoundKind kind, const SummandDistribution& d, double theta, const GrowthFunction& g,
                         double constant) {
  require_growth_class(g);
  const double sigma2 = d.variance();
  const double t = std::sqrt(theta * sigma2);
  const double w = weighted_moment_or_throw(d, g);
  BoundReport r;
  r.kind = kind;
  r.constant_used = constant;
  r.normalization = t;
  r.L = trunc_second_moment_tail(d, t) / sigma2;
  r.M = trunc_third_abs_moment_core(d, t) / (sigma2 * t);
  r.gamma = ratio(r.M, r.L);
  r.bound_value = constant * w / (sigma2 * g(t));
  return r;
}

double theta_of(std::span<const double> p) {
  if (p.empty()) throw UsageError("Poisson-binomial bound needs at least one probability");
  double theta = 0.0;
  for (double pj : p) {
    if (!(pj > 0.0 && pj <= 1.0)) throw DomainError("Poisson-binomial probabilities must lie in (0, 1]");
    theta += pj;
  }
  return theta;
}

// G_n(x) split into P(Lambda <= x^2/sigma^2) and the remaining expectation.
std::pair<double, double> g_parts(const MixingLaw& m, double sigma, double x) {
  if (x == 0.0) return {0.0, 0.0};
  const double ax = std::fabs(x);
  const double sigma2 = sigma * sigma;
  switch (m.kind()) {
    case MixingLaw::Kind::Degenerate: {
      const double u = ax / (sigma * std::sqrt(m.parameter()));
      return u >= 1.0 ? std::pair{1.0, 0.0} : std::pair{0.0, u};
    }
    case MixingLaw::Kind::Exponential:
    case MixingLaw::Kind::Gamma: {
      const double s = m.shape();
      const double theta = m.parameter();
      const double z = x * x / (sigma2 * theta);
      const double rest = ax / (sigma * std::sqrt(theta)) * std::exp(std::lgamma(s - 0.5) - std::lgamma(s)) *
                          gamma_q(s - 0.5, z);
      return {gamma_p(s, z), rest};
    }
    case MixingLaw::Kind::InverseGamma: {
      const double a = m.shape();
      const double b = m.parameter();
      const double w = b * sigma2 / (x * x);
      const double rest = ax / (sigma * std::sqrt(b)) * std::exp(std::lgamma(a + 0.5) - std::lgamma(a)) *
                          gamma_p(a + 0.5, w);
      return {gamma_q(a, w), rest};
    }
  }
  return {0.0, 0.0};
}

// The two parts of E X^2 G_n(X) are reported as L and M.
BoundReport mixed_bound(BoundKind kind, const SummandDistribution& d, const MixingLaw& m) {
  const double sigma = d.sigma();
  const double sigma2 = d.variance();
  const double first = d.expect([&](double x) { return x * x * g_parts(m, sigma, x).first; });
  const double second = d.expect([&](double x) { return x * x * g_parts(m, sigma, x).second; });
  BoundReport r;
  r.kind = kind;
  r.constant_used = constants::kUniversalIid;
  r.L = first / sigma2;
  r.M = second / sigma2;
  r.gamma = ratio(r.M, r.L);
  r.bound_value = r.constant_used * (r.L + r.M);
  return r;
}

void require_gamma_shape(const MixingLaw& m) {
  if ((m.kind() == MixingLaw::Kind::Gamma || m.kind() == MixingLaw::Kind::Exponential) && !(m.shape() > 0.5)) {
    throw DomainError("gamma mixing needs shape r > 1/2 (Gamma(r - 1/2, z) appears in the bound)");
  }
}

}  // namespace

std::string to_string(BoundKind k) {
  for (const auto& [kind, name] : kNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& name) {
  for (const auto& [kind, n] : kNames) {
    if (name == n) return kind;
  }
  std::string known;
  for (const auto& [kind, n] : kNames) known += (known.empty() ? "" : ", ") + std::string(n);
  throw UsageError("unknown bound kind '" + name + "' (expected one of: " + known + ")");
}

// --- fixed n -------------------------------------------------------------------

BoundReport bound_fixed_n(Variant v, std::span<const SummandDistribution> ds) {
  if (v == Variant::IidGeneral || v == Variant::IidSymmetric) {
    throw UsageError("constant variants 2 and 4 need identically distributed summands; pass (d, n)");
  }
  if (ds.empty()) throw UsageError("bound_fixed_n: empty summand list");
  for (const auto& d : ds) require_symmetric(v, d);
  return fixed_n_from(v, functionals_of(ds, 1.0));
}

BoundReport bound_fixed_n(Variant v, const SummandDistribution& d, int n) {
  require_symmetric(v, d);
  return fixed_n_from(v, functionals_iid(d, n, 1.0));
}

BoundReport bound_osipov(const SummandDistribution& d, int n, double eps) {
  return from_functionals(BoundKind::Lindeberg, functionals_iid(d, n, eps), constants::kUniversalGeneral);
}

BoundReport bound_osipov(std::span<const SummandDistribution> ds, double eps) {
  return from_functionals(BoundKind::Lindeberg, functionals_of(ds, eps), constants::kUniversalGeneral);
}

BoundReport bound_growth(const SummandDistribution& d, int n, const GrowthFunction& g) {
  if (n < 1) throw DomainError("n must be at least 1");
  return growth_bound(BoundKind::Growth, d, n, g, constants::kUniversalIid);
}

BoundReport bound_growth(std::span<const SummandDistribution> ds, const GrowthFunction& g) {
  if (ds.empty()) throw UsageError("bound_growth: empty summand list");
  require_growth_class(g);
  double B2 = 0.0;
  double w = 0.0;
  for (const auto& d : ds) {
    B2 += d.variance();
    w += weighted_moment_or_throw(d, g);
  }
  const FunctionalValues f = functionals_of(ds, 1.0);
  BoundReport r;
  r.kind = BoundKind::Growth;
  r.constant_used = constants::kUniversalGeneral;
  r.L = f.L;
  r.M = f.M;
  r.gamma = f.gamma;
  r.normalization = f.B_n;
  r.bound_value = r.constant_used * w / (B2 * g(f.B_n));
  return r;
}

// --- random index, normal limit --------------------------------------------------

double truncated_min_moment(const SummandDistribution& d, double t) {
  require_positive(t, "truncation level");
  return trunc_second_moment_tail(d, t) + trunc_third_abs_moment_core(d, t) / t;
}

BoundReport bound_poisson_binomial(const SummandDistribution& d, std::span<const double> p) {
  return truncated_bound(BoundKind::PoissonBinomial, d, theta_of(p), constants::kUniversalGeneral);
}

BoundReport bound_binomial(const SummandDistribution& d, int n, double p) {
  if (n < 1) throw DomainError("binomial n must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("binomial p must lie in (0, 1]");
  return truncated_bound(BoundKind::Binomial, d, n * p, constants::kUniversalIid);
}

BoundReport bound_poisson(const SummandDistribution& d, double lambda) {
  require_positive(lambda, "Poisson lambda");
  return truncated_bound(BoundKind::Poisson, d, lambda, constants::kUniversalIid);
}

BoundReport bound_growth_random(const CountingLaw& law, const SummandDistribution& d, const GrowthFunction& g) {
  switch (law.kind()) {
    case CountingLaw::Kind::PoissonBinomial:
      return growth_bound(BoundKind::GrowthRandom, d, theta_of(law.probabilities()), g,
                          constants::kUniversalGeneral);
    case CountingLaw::Kind::Binomial:
    case CountingLaw::Kind::Poisson:
      return growth_bound(BoundKind::GrowthRandom, d, law.mean(), g, constants::kUniversalIid);
    default:
      throw UsageError("growth_random bound needs a Poisson-binomial, binomial or Poisson index, got " +
                       law.label());
  }
}

BoundReport bound_be_poisson(const SummandDistribution& d, double lambda) {
  require_positive(lambda, "Poisson lambda");
  const double m3 = third_abs_moment(d);
  if (!std::isfinite(m3)) {
    throw UnboundedError("third moment infinite for " + d.label() +
                         "; only the truncated-moment and growth-function Poisson bounds apply");
  }
  const double sigma = d.sigma();
  BoundReport r;
  r.kind = BoundKind::BerryEsseenPoisson;
  r.constant_used = constants::kBerryEsseenPoisson;
  r.normalization = sigma * std::sqrt(lambda);
  r.M = m3 / (sigma * sigma * r.normalization);
  r.L = 0.0;
  r.gamma = kInf;
  r.bound_value = r.constant_used * r.M;
  return r;
}

// --- mixed Poisson ------------------------------------------------------------------

double mixed_poisson_g(const MixingLaw& m, double sigma, double x) {
  require_positive(sigma, "sigma");
  if (!std::isfinite(x)) throw DomainError("mixed_poisson_g: non-finite argument");
  require_gamma_shape(m);
  const auto [mass, rest] = g_parts(m, sigma, x);
  return mass + rest;
}

BoundReport bound_mixed_poisson(const SummandDistribution& d, const MixingLaw& m) {
  if (!m.has_mean()) throw DomainError("mixed Poisson bound: intensity " + m.label() + " has no finite mean");
  require_gamma_shape(m);
  BoundReport r = mixed_bound(BoundKind::MixedPoisson, d, m);
  const double mean = m.mean();
  r.normalization = d.sigma() * std::sqrt(mean);
  r.limit_law = m.kind() == MixingLaw::Kind::Degenerate ? LimitLaw::normal() : LimitLaw::mixture(m, mean);
  return r;
}

BoundReport bound_geometric(const SummandDistribution& d, double n) {
  require_positive(n, "geometric n");
  BoundReport r = mixed_bound(BoundKind::Geometric, d, MixingLaw::exponential(n));
  r.normalization = d.sigma() * std::sqrt(n);
  r.limit_law = LimitLaw::laplace();
  return r;
}

BoundReport bound_negative_binomial(const SummandDistribution& d, double n, double r) {
  require_positive(n, "negative binomial n");
  if (!(r > 0.5) || !std::isfinite(r)) throw DomainError("negative binomial bound needs r > 1/2");
  BoundReport rep = mixed_bound(BoundKind::NegativeBinomial, d, MixingLaw::gamma(r, n));
  rep.normalization = d.sigma() * std::sqrt(n);
  rep.limit_law = LimitLaw::variance_gamma(r);
  return rep;
}

BoundReport bound_sichel(const SummandDistribution& d, double n, double r) {
  require_positive(n, "Sichel n");
  if (!(r > 2.0) || !std::isfinite(r)) {
    throw DomainError("Sichel bound needs r > 2: the inverse-gamma intensity has no finite mean otherwise");
  }
  BoundReport rep = mixed_bound(BoundKind::Sichel, d, MixingLaw::inverse_gamma(0.5 * r, 0.5 * n));
  rep.normalization = d.sigma() * std::sqrt(n / r);
  rep.limit_law = LimitLaw::student(r);
  return rep;
}

// --- binomial vs Poisson ----------------------------------------------------------------

double tv_binomial_poisson(int n, double p) {
  if (n < 1) throw DomainError("tv_binomial_poisson: n must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("tv_binomial_poisson: p must lie in (0, 1]");
  const auto bin = CountingLaw::binomial(n, p);
  const double lambda = n * p;
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double pois = std::exp(k * log_lambda - lambda - std::lgamma(k + 1.0));
    sum += std::fabs(bin.pmf(k) - pois);
  }
  return sum + gamma_p(n + 1.0, lambda);
}

double prokhorov_bound(int n, double p) { return 2.0 * p * std::min(2.0, n * p); }

}  // namespace rsbound
