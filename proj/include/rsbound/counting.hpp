#pragma once

// Laws of the random index N of a random sum S_N = X_1 + ... + X_N.

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rsbound/limitlaws.hpp"

namespace rsbound {

class CountingLaw {
 public:
  enum class Kind { Deterministic, PoissonBinomial, Binomial, Poisson, Geometric, NegativeBinomial, PoissonInverseGamma };

  static CountingLaw deterministic(int n);
  /// Sum of independent Bernoulli(p_j), each p_j in (0, 1].
  static CountingLaw poisson_binomial(std::vector<double> p);
  static CountingLaw binomial(int n, double p);
  static CountingLaw poisson(double lambda);
  /// P(N = k) = (1/(n+1)) (n/(n+1))^k, mean n.
  static CountingLaw geometric(double n);
  /// P(N = k) = Gamma(r+k)/(Gamma(r) k!) (1/(1+n))^r (n/(1+n))^k, mean n r.
  static CountingLaw negative_binomial(double r, double n);
  /// Poisson with inverse-gamma intensity of shape r/2 and rate n/2.
  static CountingLaw poisson_inverse_gamma(double r, double n);

  Kind kind() const { return kind_; }
  int n() const { return n_int_; }
  double p() const { return p_; }
  double lambda() const { return lambda_; }
  double r() const { return r_; }
  double size() const { return size_; }  // the real parameter n of the mixed laws
  std::span<const double> probabilities() const { return probs_; }

  double pmf(int k) const;
  /// P(N > k).
  double tail(int k) const;
  /// Smallest K with P(N > K) <= tail_tol; ResourceError beyond max_terms.
  int truncation_point(double tail_tol, int max_terms = 10'000'000) const;
  /// pmf(0..K) for K = truncation_point(tail_tol).
  std::vector<double> pmf_table(double tail_tol, int max_terms = 10'000'000) const;

  bool has_mean() const;
  /// DomainError when infinite.
  double mean() const;
  /// Intensity law for the mixed Poisson kinds (Poisson included, degenerate).
  std::optional<MixingLaw> mixing() const;

  long long sample(std::mt19937_64& rng) const;
  std::string label() const;

 private:
  explicit CountingLaw(Kind kind) : kind_(kind) {}

  Kind kind_;
  int n_int_ = 0;
  double p_ = 0.0;
  double lambda_ = 0.0;
  double r_ = 0.0;
  double size_ = 0.0;
  std::vector<double> probs_;
  // Poisson-binomial pmf.
  std::vector<double> table_;
};

/// Exact Poisson-binomial pmf by dynamic programming over the p_j.
std::vector<double> poisson_binomial_pmf(std::span<const double> p);

/// Poisson-inverse gamma pmf by the modified Bessel closed form and its
/// three-term recurrence, k = 0..kmax.
std::vector<double> pig_pmf_bessel(double r, double n, int kmax);
/// The same pmf by quadrature of the mixture integral in log-intensity.
double pig_pmf_quadrature(double r, double n, int k);

}  // namespace rsbound
