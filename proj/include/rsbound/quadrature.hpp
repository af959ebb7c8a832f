#pragma once

// Thin wrappers over Boost.Math adaptive quadrature. Kept header-only so
// integrands inline; callers never touch Boost directly.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

namespace rsbound::quad {

inline constexpr unsigned kMaxDepth = 22;

namespace detail {
// Boost's recursive driver compares an unscaled panel error against a scaled
// estimate, so panels narrower than about tol/eps never converge. Bisection
// here calls its fixed 61-point rule on [0, 1], where the two scales agree.
template <class F>
double bisect(F& f, double a, double b, double abs_tol, double tol, unsigned depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double w = b - a;
  auto unit = [&](double t) { return w * f(a + w * t); };
  double error = 0.0;
  const double est = GK::integrate(unit, 0.0, 1.0, 0, 0.0, &error);
  // The rule reports the error of the [-1, 1] integral, twice the true one.
  error *= 0.5;
  if (depth == 0 || error <= abs_tol || error <= tol * std::fabs(est)) return est;
  const double mid = a + 0.5 * w;
  return bisect(f, a, mid, 0.5 * abs_tol, tol, depth - 1) + bisect(f, mid, b, 0.5 * abs_tol, tol, depth - 1);
}
}  // namespace detail

/// Adaptive Gauss-Kronrod (30/61) over [a, b]; either bound may be infinite.
/// `tol` is relative to the L1 norm of the integrand.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13, unsigned max_depth = kMaxDepth) {
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, std::min(max_depth, 15u), tol,
                                                                         &error);
  }
  double l1 = 0.0;
  {
    const double w = b - a;
    auto unit_abs = [&](double t) { return std::fabs(w * f(a + w * t)); };
    l1 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(unit_abs, 0.0, 1.0, 0, 0.0);
  }
  return detail::bisect(f, a, b, tol * l1, tol, max_depth);
}

/// Adaptive Gauss-Kronrod over a finite [a, b] to an absolute error target.
template <class F>
double integrate_abs(F&& f, double a, double b, double abs_tol, unsigned max_depth = kMaxDepth) {
  if (a == b) return 0.0;
  return detail::bisect(f, a, b, abs_tol, 0.0, max_depth);
}

/// Tanh-sinh over a finite [a, b]; tolerates integrable endpoint singularities.
template <class F>
double integrate_endpoint_singular(F&& f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator.integrate(f, a, b, tol);
}

}  // namespace rsbound::quad
