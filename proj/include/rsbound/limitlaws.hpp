#pragma once

// Scale mixtures of the normal law that arise as limits of mixed Poisson
// random sums: Laplace, symmetric variance-gamma and Student.

#include <optional>
#include <string>

namespace rsbound {

double laplace_cdf(double x);

/// V_r(x) = (1/Gamma(r)) int_0^inf Phi(x / sqrt(l)) l^{r-1} e^{-l} dl.
double variance_gamma_cdf(double r, double x);

/// Student distribution function computed from its chi-square scale-mixture form.
double student_cdf(double r, double x);
/// Student distribution function from quadrature of the density.
double student_cdf_by_density(double r, double x);
double student_density(double r, double x);

/// Positive mixing variable Lambda of a mixed Poisson law.
class MixingLaw {
 public:
  enum class Kind { Degenerate, Exponential, Gamma, InverseGamma };

  static MixingLaw degenerate(double value);
  static MixingLaw exponential_mean1() { return exponential(1.0); }
  static MixingLaw exponential(double mean);
  static MixingLaw gamma(double shape, double scale = 1.0);
  /// Density rate^shape l^{-shape-1} e^{-rate/l} / Gamma(shape).
  static MixingLaw inverse_gamma(double shape, double rate);

  /// Law of c * Lambda.
  MixingLaw scaled_by(double c) const;

  Kind kind() const { return kind_; }
  double shape() const { return shape_; }
  /// Degenerate: the value; Exponential: the mean; Gamma: the scale; InverseGamma: the rate.
  double parameter() const { return param_; }
  bool has_mean() const;
  /// Throws DomainError when the mean is infinite.
  double mean() const;
  std::string label() const;

 private:
  MixingLaw(Kind kind, double shape, double param) : kind_(kind), shape_(shape), param_(param) {}
  Kind kind_;
  double shape_;
  double param_;
};

/// E Phi(x sqrt(normalization / Lambda)).
double mixture_cdf(const MixingLaw& m, double x, double normalization);
/// mixture_cdf with normalization E Lambda; DomainError when the mean is undefined.
double mixture_cdf_mean_normalized(const MixingLaw& m, double x);

/// Limit law attached to a bound.
struct LimitLaw {
  enum class Kind { Normal, Laplace, VarianceGamma, Student, Mixture };
  Kind kind = Kind::Normal;
  double r = 0.0;
  // Mixture only: x -> mixture_cdf(*mixing, x, normalization).
  std::optional<MixingLaw> mixing;
  double normalization = 1.0;

  static LimitLaw normal() { return {Kind::Normal, 0.0, std::nullopt, 1.0}; }
  static LimitLaw laplace() { return {Kind::Laplace, 0.0, std::nullopt, 1.0}; }
  static LimitLaw variance_gamma(double r) { return {Kind::VarianceGamma, r, std::nullopt, 1.0}; }
  static LimitLaw student(double r) { return {Kind::Student, r, std::nullopt, 1.0}; }
  static LimitLaw mixture(const MixingLaw& m, double normalization) {
    return {Kind::Mixture, 0.0, m, normalization};
  }

  double cdf(double x) const;
  std::string label() const;
};

}  // namespace rsbound
