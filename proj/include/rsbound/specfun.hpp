#pragma once

// Scalar special functions. All entry points reject NaN and infinite
// arguments with DomainError instead of propagating them.

namespace rsbound {

/// Standard normal distribution function, absolute error below 1e-14.
double std_normal_cdf(double x);

/// Gamma function for a > 0.
double gamma_fn(double a);

/// log Gamma(a) for a > 0.
double log_gamma_fn(double a);

/// Lower incomplete gamma function gamma(a, z) = int_0^z y^{a-1} e^{-y} dy.
double lower_inc_gamma(double a, double z);

/// Upper incomplete gamma function Gamma(a, z) = int_z^inf y^{a-1} e^{-y} dy.
double upper_inc_gamma(double a, double z);

/// Regularized lower incomplete gamma P(a, z) = gamma(a, z) / Gamma(a).
double gamma_p(double a, double z);

/// Regularized upper incomplete gamma Q(a, z) = Gamma(a, z) / Gamma(a).
double gamma_q(double a, double z);

}  // namespace rsbound
