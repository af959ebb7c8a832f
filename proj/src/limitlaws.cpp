#include "rsbound/limitlaws.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsbound/errors.hpp"
#include "rsbound/quadrature.hpp"
#include "rsbound/specfun.hpp"

namespace rsbound {
namespace {

constexpr double kTol = 1e-13;

void require_shape(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(std::string(what) + ": shape must be positive");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

// Integral over [0, b] split at `feature` times powers of ten, so a sharp
// rise of the integrand near `feature` is never stepped over. The integrals
// handled here are at most 1/2 in absolute value.
template <class F>
double integrate_split(F&& f, double b, double feature) {
  constexpr double kAbsTol = 1e-14;
  double total = 0.0;
  double lo = 0.0;
  for (double k : {1e-4, 1e-2, 1.0, 1e2, 1e4}) {
    const double cut = feature * k;
    if (cut <= lo || cut >= b) continue;
    total += quad::integrate_abs(f, lo, cut, kAbsTol);
    lo = cut;
  }
  return total + quad::integrate_abs(f, lo, b, kAbsTol);
}

// Phi(z) - 1/2 without cancellation near 0.
double centred_phi(double z) { return 0.5 * std::erf(z * M_SQRT1_2); }

// E h(G) for G ~ Gamma(s, 1), where |h| <= 1/2 and h varies on the scale
// G ~ feature. The lambda-domain is cut to the effective support; the
// neglected mass is below 1e-17.
template <class H>
double gamma_expectation(double s, double feature, H&& h) {
  const double spread = 40.0 * std::sqrt(s) + 40.0;
  const double hi = s + spread;
  if (s < 1.0) {
    // t = u^s removes the u^{s-1} singularity at the origin.
    const double inv_s = 1.0 / s;
    const double norm = std::exp(-std::lgamma(s + 1.0));
    auto integrand = [&](double t) {
      const double u = std::pow(t, inv_s);
      return h(u) * std::exp(-u);
    };
    return norm * integrate_split(integrand, std::pow(hi, s), std::pow(feature, s));
  }
  const double lo = s > 400.0 ? std::max(0.0, s - spread) : 0.0;
  const double lgs = std::lgamma(s);
  auto integrand = [&](double u) {
    if (u <= 0.0) return s == 1.0 ? h(u) : 0.0;
    return h(u) * std::exp((s - 1.0) * std::log(u) - u - lgs);
  };
  if (lo == 0.0) return integrate_split(integrand, hi, feature);
  // Split at the mode so the narrow peak is always resolved.
  return quad::integrate(integrand, lo, s, kTol) + quad::integrate(integrand, s, hi, kTol);
}

// E Phi(y / sqrt(G)), G ~ Gamma(s, 1).
double inverse_scale_mixture(double s, double y) {
  if (y == 0.0) return 0.5;
  auto h = [y](double u) {
    if (u <= 0.0) return y > 0.0 ? 0.5 : -0.5;
    return centred_phi(y / std::sqrt(u));
  };
  return std::clamp(0.5 + gamma_expectation(s, y * y, h), 0.0, 1.0);
}

// E Phi(y sqrt(G)), G ~ Gamma(s, 1).
double direct_scale_mixture(double s, double y) {
  if (y == 0.0) return 0.5;
  auto h = [y](double u) { return centred_phi(y * std::sqrt(u)); };
  return std::clamp(0.5 + gamma_expectation(s, 1.0 / (y * y), h), 0.0, 1.0);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

double laplace_cdf(double x) {
  require_finite(x, "laplace_cdf");
  return x <= 0.0 ? 0.5 * std::exp(M_SQRT2 * x) : 1.0 - 0.5 * std::exp(-M_SQRT2 * x);
}

double variance_gamma_cdf(double r, double x) {
  require_shape(r, "variance_gamma_cdf");
  require_finite(x, "variance_gamma_cdf");
  return inverse_scale_mixture(r, x);
}

double student_cdf(double r, double x) {
  require_shape(r, "student_cdf");
  require_finite(x, "student_cdf");
  return direct_scale_mixture(0.5 * r, x * std::sqrt(2.0 / r));
}

double student_density(double r, double x) {
  require_shape(r, "student_density");
  require_finite(x, "student_density");
  const double log_norm = std::lgamma(0.5 * (r + 1.0)) - std::lgamma(0.5 * r) - 0.5 * std::log(M_PI * r);
  return std::exp(log_norm - 0.5 * (r + 1.0) * std::log1p(x * x / r));
}

double student_cdf_by_density(double r, double x) {
  require_shape(r, "student_cdf_by_density");
  require_finite(x, "student_cdf_by_density");
  const double half = quad::integrate([r](double y) { return student_density(r, y); }, 0.0, std::fabs(x), kTol);
  return std::clamp(x >= 0.0 ? 0.5 + half : 0.5 - half, 0.0, 1.0);
}

// --- mixing laws -----------------------------------------------------------

MixingLaw MixingLaw::degenerate(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("degenerate mixing value must be positive");
  return {Kind::Degenerate, 0.0, value};
}

MixingLaw MixingLaw::exponential(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("exponential mixing mean must be positive");
  return {Kind::Exponential, 1.0, mean};
}

MixingLaw MixingLaw::gamma(double shape, double scale) {
  require_shape(shape, "gamma mixing");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("gamma mixing scale must be positive");
  return {Kind::Gamma, shape, scale};
}

MixingLaw MixingLaw::inverse_gamma(double shape, double rate) {
  require_shape(shape, "inverse gamma mixing");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("inverse gamma mixing rate must be positive");
  return {Kind::InverseGamma, shape, rate};
}

MixingLaw MixingLaw::scaled_by(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("mixing scale factor must be positive");
  return {kind_, shape_, param_ * c};
}

bool MixingLaw::has_mean() const { return kind_ != Kind::InverseGamma || shape_ > 1.0; }

double MixingLaw::mean() const {
  switch (kind_) {
    case Kind::Degenerate:
    case Kind::Exponential: return param_;
    case Kind::Gamma: return shape_ * param_;
    case Kind::InverseGamma:
      if (shape_ <= 1.0) throw DomainError("inverse gamma mixing law with shape <= 1 has no finite mean");
      return param_ / (shape_ - 1.0);
  }
  return 0.0;
}

std::string MixingLaw::label() const {
  switch (kind_) {
    case Kind::Degenerate: return "degenerate(" + fmt(param_) + ")";
    case Kind::Exponential: return "exponential(mean=" + fmt(param_) + ")";
    case Kind::Gamma: return "gamma(shape=" + fmt(shape_) + ",scale=" + fmt(param_) + ")";
    case Kind::InverseGamma: return "inverse_gamma(shape=" + fmt(shape_) + ",rate=" + fmt(param_) + ")";
  }
  return {};
}

double mixture_cdf(const MixingLaw& m, double x, double normalization) {
  require_finite(x, "mixture_cdf");
  if (!(normalization > 0.0) || !std::isfinite(normalization)) {
    throw DomainError("mixture_cdf: normalization must be positive");
  }
  switch (m.kind()) {
    case MixingLaw::Kind::Degenerate: return std_normal_cdf(x * std::sqrt(normalization / m.parameter()));
    case MixingLaw::Kind::Exponential:
      return inverse_scale_mixture(1.0, x * std::sqrt(normalization / m.parameter()));
    case MixingLaw::Kind::Gamma:
      return inverse_scale_mixture(m.shape(), x * std::sqrt(normalization / m.parameter()));
    case MixingLaw::Kind::InverseGamma:
      return direct_scale_mixture(m.shape(), x * std::sqrt(normalization / m.parameter()));
  }
  return 0.0;
}

double mixture_cdf_mean_normalized(const MixingLaw& m, double x) { return mixture_cdf(m, x, m.mean()); }

double LimitLaw::cdf(double x) const {
  switch (kind) {
    case Kind::Normal: return std_normal_cdf(x);
    case Kind::Laplace: return laplace_cdf(x);
    case Kind::VarianceGamma: return variance_gamma_cdf(r, x);
    case Kind::Student: return student_cdf(r, x);
    case Kind::Mixture: return mixture_cdf(*mixing, x, normalization);
  }
  return 0.0;
}

std::string LimitLaw::label() const {
  switch (kind) {
    case Kind::Normal: return "normal";
    case Kind::Laplace: return "laplace";
    case Kind::VarianceGamma: return "variance_gamma(" + fmt(r) + ")";
    case Kind::Student: return "student(" + fmt(r) + ")";
    case Kind::Mixture: return "normal_mixture(" + mixing->label() + ")";
  }
  return {};
}

}  // namespace rsbound
