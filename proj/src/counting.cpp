#include "rsbound/counting.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "rsbound/errors.hpp"
#include "rsbound/quadrature.hpp"
#include "rsbound/specfun.hpp"

namespace rsbound {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1]");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

std::vector<double> poisson_binomial_pmf(std::span<const double> p) {
  std::vector<double> pmf(p.size() + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t len = 1;
  for (double pj : p) {
    require_probability(pj, "Poisson-binomial probability");
    for (std::size_t j = len; j > 0; --j) pmf[j] = pmf[j] * (1.0 - pj) + pmf[j - 1] * pj;
    pmf[0] *= 1.0 - pj;
    ++len;
  }
  return pmf;
}

namespace {

// log P(N = k) by quadrature of the mixture integral in u = log(lambda).
double log_pig_pmf_quadrature(double r, double n, int k) {
  const double alpha = 0.5 * r;
  const double beta = 0.5 * n;
  const double nu = k - alpha;
  const double log_c = alpha * std::log(beta) - std::lgamma(alpha) - log_factorial(k);
  auto h = [&](double u) { return nu * u - std::exp(u) - beta * std::exp(-u); };
  const double mode = std::log(0.5 * (nu + std::sqrt(nu * nu + 4.0 * beta)));
  const double h_star = h(mode);
  const double width = 1.0 / std::sqrt(std::exp(mode) + beta * std::exp(-mode));
  // h is concave, so walking outward with growing steps always terminates.
  auto reach = [&](double dir) {
    double step = width;
    double u = mode;
    for (int i = 0; i < 200; ++i) {
      u += dir * step;
      if (h(u) < h_star - 60.0) return u;
      step *= 1.5;
    }
    throw ResourceError("pig_pmf_quadrature: integrand support not located");
  };
  const double lo = reach(-1.0);
  const double hi = reach(1.0);
  auto f = [&](double u) { return std::exp(h(u) - h_star); };
  const double scaled = quad::integrate(f, lo, mode, 1e-14) + quad::integrate(f, mode, hi, 1e-14);
  return log_c + h_star + std::log(scaled);
}

}  // namespace

double pig_pmf_quadrature(double r, double n, int k) {
  require_positive(r, "PIG shape r");
  require_positive(n, "PIG size n");
  if (k < 0) return 0.0;
  return std::exp(log_pig_pmf_quadrature(r, n, k));
}

std::vector<double> pig_pmf_bessel(double r, double n, int kmax) {
  require_positive(r, "PIG shape r");
  require_positive(n, "PIG size n");
  if (kmax < 0) return {};
  const double alpha = 0.5 * r;
  const double beta = 0.5 * n;
  const double z = 2.0 * std::sqrt(beta);
  const double log_c = std::log(2.0) + 0.5 * alpha * std::log(beta) - std::lgamma(alpha);
  const double k0 = boost::math::cyl_bessel_k(alpha, z);
  const double k1 = boost::math::cyl_bessel_k(std::fabs(1.0 - alpha), z);
  std::vector<double> q(static_cast<std::size_t>(kmax) + 1);
  double log_q0 = 0.0;
  double log_q1 = 0.0;
  if (std::isnormal(k0) && std::isnormal(k1)) {
    log_q0 = log_c + std::log(k0);
    log_q1 = log_c + 0.5 * std::log(beta) + std::log(k1);
  } else {
    // Bessel values underflow for very large n.
    log_q0 = log_pig_pmf_quadrature(r, n, 0);
    log_q1 = log_pig_pmf_quadrature(r, n, 1);
  }
  if (kmax == 0) {
    q[0] = std::exp(log_q0);
    return q;
  }
  // Recurrence on values scaled by exp(-offset), rescaled before overflow.
  double offset = log_q1;
  double prev = std::exp(log_q0 - offset);
  double cur = 1.0;
  std::vector<double> log_q(q.size());
  log_q[0] = log_q0;
  log_q[1] = log_q1;
  for (int k = 1; k < kmax; ++k) {
    const double next = ((k - alpha) * cur + beta * prev / k) / (k + 1);
    log_q[k + 1] = offset + std::log(next);
    prev = cur;
    cur = next;
    if (cur > 1e200) {
      offset += std::log(cur);
      prev /= cur;
      cur = 1.0;
    }
  }
  for (int k = 0; k <= kmax; ++k) q[k] = std::exp(log_q[k]);
  return q;
}

// --- construction ------------------------------------------------------------

CountingLaw CountingLaw::deterministic(int n) {
  if (n < 1) throw DomainError("deterministic index n must be >= 1");
  CountingLaw c(Kind::Deterministic);
  c.n_int_ = n;
  return c;
}

CountingLaw CountingLaw::poisson_binomial(std::vector<double> p) {
  if (p.empty()) throw UsageError("Poisson-binomial law needs at least one probability");
  for (double pj : p) require_probability(pj, "Poisson-binomial probability");
  CountingLaw c(Kind::PoissonBinomial);
  c.n_int_ = static_cast<int>(p.size());
  c.table_ = poisson_binomial_pmf(p);
  c.probs_ = std::move(p);
  return c;
}

CountingLaw CountingLaw::binomial(int n, double p) {
  if (n < 1) throw DomainError("binomial n must be >= 1");
  require_probability(p, "binomial p");
  CountingLaw c(Kind::Binomial);
  c.n_int_ = n;
  c.p_ = p;
  return c;
}

CountingLaw CountingLaw::poisson(double lambda) {
  require_positive(lambda, "Poisson lambda");
  CountingLaw c(Kind::Poisson);
  c.lambda_ = lambda;
  return c;
}

CountingLaw CountingLaw::geometric(double n) {
  require_positive(n, "geometric n");
  CountingLaw c(Kind::Geometric);
  c.size_ = n;
  return c;
}

CountingLaw CountingLaw::negative_binomial(double r, double n) {
  require_positive(r, "negative binomial r");
  require_positive(n, "negative binomial n");
  CountingLaw c(Kind::NegativeBinomial);
  c.r_ = r;
  c.size_ = n;
  return c;
}

CountingLaw CountingLaw::poisson_inverse_gamma(double r, double n) {
  require_positive(r, "PIG shape r");
  require_positive(n, "PIG size n");
  CountingLaw c(Kind::PoissonInverseGamma);
  c.r_ = r;
  c.size_ = n;
  return c;
}

// --- pmf and tails -------------------------------------------------------------

double CountingLaw::pmf(int k) const {
  if (k < 0) return 0.0;
  switch (kind_) {
    case Kind::Deterministic: return k == n_int_ ? 1.0 : 0.0;
    case Kind::PoissonBinomial: return k <= n_int_ ? table_[k] : 0.0;
    case Kind::Binomial: {
      if (k > n_int_) return 0.0;
      if (p_ == 1.0) return k == n_int_ ? 1.0 : 0.0;
      const double lc = log_factorial(n_int_) - log_factorial(k) - log_factorial(n_int_ - k);
      return std::exp(lc + k * std::log(p_) + (n_int_ - k) * std::log1p(-p_));
    }
    case Kind::Poisson: return std::exp(k * std::log(lambda_) - lambda_ - log_factorial(k));
    case Kind::Geometric: {
      const double q = size_ / (size_ + 1.0);
      return std::exp(k * std::log(q) - std::log1p(size_));
    }
    case Kind::NegativeBinomial: {
      const double lc = std::lgamma(r_ + k) - std::lgamma(r_) - log_factorial(k);
      return std::exp(lc - r_ * std::log1p(size_) + k * (std::log(size_) - std::log1p(size_)));
    }
    case Kind::PoissonInverseGamma: return pig_pmf_bessel(r_, size_, k)[k];
  }
  return 0.0;
}

double CountingLaw::tail(int k) const {
  if (k < 0) return 1.0;
  switch (kind_) {
    case Kind::Deterministic: return k >= n_int_ ? 0.0 : 1.0;
    case Kind::PoissonBinomial: {
      double s = 0.0;
      for (int j = n_int_; j > k; --j) s += table_[j];
      return s;
    }
    case Kind::Binomial:
      if (k >= n_int_) return 0.0;
      if (p_ == 1.0) return 1.0;
      return boost::math::ibeta(static_cast<double>(k) + 1.0, static_cast<double>(n_int_ - k), p_);
    case Kind::Poisson: return gamma_p(static_cast<double>(k) + 1.0, lambda_);
    case Kind::Geometric: return std::exp((k + 1.0) * (std::log(size_) - std::log1p(size_)));
    case Kind::NegativeBinomial:
      return boost::math::ibeta(static_cast<double>(k) + 1.0, r_, size_ / (1.0 + size_));
    case Kind::PoissonInverseGamma: {
      const auto q = pig_pmf_bessel(r_, size_, k);
      long double s = 0.0L;
      for (double v : q) s += v;
      return std::max(0.0, static_cast<double>(1.0L - s));
    }
  }
  return 0.0;
}

int CountingLaw::truncation_point(double tail_tol, int max_terms) const {
  if (!(tail_tol >= 0.0 && tail_tol < 1.0)) throw DomainError("tail tolerance must lie in [0, 1)");
  switch (kind_) {
    case Kind::Deterministic:
    case Kind::PoissonBinomial:
    case Kind::Binomial: {
      int k = 0;
      while (k < n_int_ && tail(k) > tail_tol) ++k;
      return k;
    }
    case Kind::PoissonInverseGamma: {
      // Polynomial tail: grow the pmf table until the remaining mass is small.
      int kmax = 64;
      for (;;) {
        const auto q = pig_pmf_bessel(r_, size_, kmax);
        long double s = 0.0L;
        for (int k = 0; k <= kmax; ++k) {
          s += q[k];
          if (1.0L - s <= tail_tol) return k;
        }
        if (kmax >= max_terms) break;
        kmax = std::min(max_terms, 2 * kmax);
      }
      throw ResourceError("counting law " + label() + ": truncation beyond " + std::to_string(max_terms) +
                          " terms; use Monte Carlo");
    }
    default: break;
  }
  // Nonincreasing tail: exponential search, then bisection.
  int hi = 1;
  while (tail(hi) > tail_tol) {
    if (hi >= max_terms) {
      throw ResourceError("counting law " + label() + ": truncation beyond " + std::to_string(max_terms) +
                          " terms; use Monte Carlo");
    }
    hi = std::min(max_terms, 2 * hi);
  }
  int lo = -1;  // tail(lo) > tol
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (tail(mid) > tail_tol) lo = mid; else hi = mid;
  }
  return hi;
}

std::vector<double> CountingLaw::pmf_table(double tail_tol, int max_terms) const {
  const int K = truncation_point(tail_tol, max_terms);
  if (kind_ == Kind::PoissonInverseGamma) return pig_pmf_bessel(r_, size_, K);
  std::vector<double> out(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) out[k] = pmf(k);
  return out;
}

bool CountingLaw::has_mean() const { return kind_ != Kind::PoissonInverseGamma || r_ > 2.0; }

double CountingLaw::mean() const {
  switch (kind_) {
    case Kind::Deterministic: return n_int_;
    case Kind::PoissonBinomial: {
      double s = 0.0;
      for (double pj : probs_) s += pj;
      return s;
    }
    case Kind::Binomial: return n_int_ * p_;
    case Kind::Poisson: return lambda_;
    case Kind::Geometric: return size_;
    case Kind::NegativeBinomial: return size_ * r_;
    case Kind::PoissonInverseGamma:
      if (r_ <= 2.0) throw DomainError("Poisson-inverse gamma law with r <= 2 has no finite mean");
      return size_ / (r_ - 2.0);
  }
  return 0.0;
}

std::optional<MixingLaw> CountingLaw::mixing() const {
  switch (kind_) {
    case Kind::Poisson: return MixingLaw::degenerate(lambda_);
    case Kind::Geometric: return MixingLaw::exponential(size_);
    case Kind::NegativeBinomial: return MixingLaw::gamma(r_, size_);
    case Kind::PoissonInverseGamma: return MixingLaw::inverse_gamma(0.5 * r_, 0.5 * size_);
    default: return std::nullopt;
  }
}

long long CountingLaw::sample(std::mt19937_64& rng) const {
  auto poisson = [&rng](double mean) -> long long {
    if (!(mean > 0.0)) return 0;
    if (mean > 1e15) throw ResourceError("sampled Poisson intensity too large to simulate");
    return std::poisson_distribution<long long>(mean)(rng);
  };
  switch (kind_) {
    case Kind::Deterministic: return n_int_;
    case Kind::PoissonBinomial: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      long long k = 0;
      for (double pj : probs_) k += u(rng) < pj ? 1 : 0;
      return k;
    }
    case Kind::Binomial: return std::binomial_distribution<long long>(n_int_, p_)(rng);
    case Kind::Poisson: return poisson(lambda_);
    case Kind::Geometric: return poisson(size_ * std::exponential_distribution<double>(1.0)(rng));
    case Kind::NegativeBinomial: return poisson(size_ * std::gamma_distribution<double>(r_, 1.0)(rng));
    case Kind::PoissonInverseGamma: {
      double g = 0.0;
      while (g <= 0.0) g = std::gamma_distribution<double>(0.5 * r_, 1.0)(rng);
      return poisson(0.5 * size_ / g);
    }
  }
  return 0;
}

std::string CountingLaw::label() const {
  switch (kind_) {
    case Kind::Deterministic: return "deterministic(" + std::to_string(n_int_) + ")";
    case Kind::PoissonBinomial: {
      std::string s = "poisson_binomial(";
      for (std::size_t j = 0; j < probs_.size(); ++j) s += (j ? ";" : "") + fmt(probs_[j]);
      return s + ")";
    }
    case Kind::Binomial: return "binomial(" + std::to_string(n_int_) + "," + fmt(p_) + ")";
    case Kind::Poisson: return "poisson(" + fmt(lambda_) + ")";
    case Kind::Geometric: return "geometric(" + fmt(size_) + ")";
    case Kind::NegativeBinomial: return "negative_binomial(r=" + fmt(r_) + ",n=" + fmt(size_) + ")";
    case Kind::PoissonInverseGamma: return "poisson_inverse_gamma(r=" + fmt(r_) + ",n=" + fmt(size_) + ")";
  }
  return {};
}

}  // namespace rsbound
