#include "rsbound/constants.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "rsbound/errors.hpp"
#include "rsbound/specfun.hpp"

namespace rsbound {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
const double kSqrtE = std::sqrt(std::exp(1.0));
const double kSqrt2PiE = std::sqrt(2.0 * M_PI * std::exp(1.0));

// Above this gamma, gamma + 4 < K gamma and the minimax decreases in gamma.
constexpr double kMonotoneFrom = 13.0;

constexpr double kBracketLo = 1e-12;
constexpr double kBracketHi = 0.5 - 1e-12;

double golden_max(auto&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({fc, fd, f(0.5 * (a + b))});
}

}  // namespace

namespace constants {

std::span<const Entry> registry() {
  static const std::array<Entry, 7> entries = {{
      {"berry_esseen_general", kBerryEsseenGeneral},
      {"berry_esseen_iid", kBerryEsseenIid},
      {"berry_esseen_poisson", kBerryEsseenPoisson},
      {"minimax_lower", kMinimaxLowerConstant},
      {"universal_general", kUniversalGeneral},
      {"universal_iid", kUniversalIid},
      {"zolotarev_k", kZolotarevK},
  }};
  return entries;
}

std::uint64_t registry_hash() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[64];
  for (const Entry& e : registry()) {
    const int len = std::snprintf(buf, sizeof buf, "=%.17g;", e.value);
    for (const char* p = e.name; *p; ++p) h = (h ^ static_cast<unsigned char>(*p)) * 0x100000001b3ULL;
    for (int i = 0; i < len; ++i) h = (h ^ static_cast<unsigned char>(buf[i])) * 0x100000001b3ULL;
  }
  return h;
}

}  // namespace constants

VariantTraits traits(Variant v) {
  switch (v) {
    case Variant::General: return {constants::kBerryEsseenGeneral, true, true};
    case Variant::IidGeneral: return {constants::kBerryEsseenIid, true, true};
    case Variant::Symmetric: return {constants::kBerryEsseenGeneral, false, false};
    case Variant::IidSymmetric: return {constants::kBerryEsseenIid, false, false};
  }
  throw UsageError("unknown constant variant");
}

Variant variant_from_int(int id) {
  if (id < 1 || id > 4) throw UsageError("variant must be 1, 2, 3 or 4");
  return static_cast<Variant>(id);
}

double h_function(Variant v, double gamma, double A) {
  if (!(A > 0.0 && A < 0.5)) throw DomainError("h_function: A must lie in (0, 1/2)");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("h_function: gamma must be finite and nonnegative");
  const VariantTraits t = traits(v);
  const double s = std::sqrt(1.0 - 2.0 * A);
  const double lyapunov = t.uses_min_term ? std::min(constants::kZolotarevK * gamma, gamma + 4.0) : gamma;
  const double be_term = t.be_constant * lyapunov / (s * s * s);
  if (t.has_shift_term) {
    return 1.0 + kInvSqrt2Pi * (1.0 + 2.0 / (kSqrtE * s * (1.0 + s))) + be_term;
  }
  return 1.0 + 2.0 / (kSqrt2PiE * s * (1.0 + s)) + be_term;
}

MinimaxPoint minimax_point(Variant v, double gamma) {
  double lo = kBracketLo;
  double hi = kBracketHi;
  // A * H(gamma, A) is strictly increasing on (0, 1/2).
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid * h_function(v, gamma, mid) < constants::kMinimaxLowerConstant) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double A = 0.5 * (lo + hi);
  return {A, h_function(v, gamma, A) / (1.0 + gamma)};
}

double minimax_value(Variant v, double gamma) { return minimax_point(v, gamma).value; }

double c_gamma(Variant v, double gamma) {
  if (std::isnan(gamma) || gamma < 0.0) throw DomainError("c_gamma: gamma must be nonnegative");
  if (std::isinf(gamma)) return traits(v).be_constant;
  if (gamma >= kMonotoneFrom) return minimax_value(v, gamma);

  constexpr int kSteps = 130;
  const double step = (kMonotoneFrom - gamma) / kSteps;
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i <= kSteps; ++i) {
    const double value = minimax_value(v, gamma + i * step);
    if (value > best) {
      best = value;
      best_i = i;
    }
  }
  const double lo = gamma + std::max(0, best_i - 1) * step;
  const double hi = gamma + std::min(kSteps, best_i + 1) * step;
  const double refined = golden_max([&](double g) { return minimax_value(v, g); }, lo, hi, 1e-10);
  return std::max(best, refined);
}

std::array<double, 9> published_table(Variant v) {
  switch (v) {
    case Variant::General:
      return {1.8627, 1.8587, 1.7244, 1.5605, 1.3488, 1.0836, 0.9393, 0.6067, 0.5583};
    case Variant::IidGeneral:
      return {1.8546, 1.8338, 1.6608, 1.4793, 1.2540, 0.9781, 0.8292, 0.5147, 0.4690};
    case Variant::Symmetric:
      return {1.5769, 1.5749, 1.4532, 1.3033, 1.1115, 0.8729, 0.7433, 0.5808, 0.5583};
    case Variant::IidSymmetric:
      return {1.5645, 1.5534, 1.4018, 1.2388, 1.0373, 0.7915, 0.6591, 0.4923, 0.4690};
  }
  throw UsageError("unknown constant variant");
}

double round4(double x) { return std::round(x * 1e4) / 1e4; }

std::vector<ConstantTableEntry> reproduce_table(Variant v) {
  std::vector<ConstantTableEntry> rows;
  rows.reserve(kTableGammas.size());
  for (double g : kTableGammas) {
    const double c = c_gamma(v, g);
    rows.push_back({g, c, round4(c)});
  }
  return rows;
}

double lemma5_constant() {
  auto gap = [](double z) { return std::fabs(1.0 / (1.0 + z * z) - std_normal_cdf(-z)); };
  constexpr int kScan = 2000;
  constexpr double kHi = 20.0;
  double best = -1.0;
  int best_i = 1;
  for (int i = 1; i <= kScan; ++i) {
    const double value = gap(kHi * i / kScan);
    if (value > best) {
      best = value;
      best_i = i;
    }
  }
  const double lo = kHi * (best_i - 1) / kScan;
  const double hi = kHi * std::min(kScan, best_i + 1) / kScan;
  return std::max(best, golden_max(gap, std::max(lo, 1e-12), hi, 1e-10));
}

ScaleDistance normal_scale_distance(double q) {
  if (!std::isfinite(q) || q <= 0.0) throw DomainError("normal_scale_distance: q must be positive");
  if (q == 1.0) return {0.0, 0.0, 0.0, 0.0};
  const double q2 = q * q;
  const double x_star = std::sqrt(std::log(q2) / (q2 - 1.0));
  const double sup = std::fabs(std_normal_cdf(q * x_star) - std_normal_cdf(x_star));
  const double lnq = std::log(q);
  const double lagrange =
      std::sqrt((q - 1.0) * lnq / (M_PI * (q + 1.0))) * std::exp(-std::min(1.0, q) * lnq / (q2 - 1.0));
  const double simple = (std::max(q, 1.0 / q) - 1.0) / kSqrt2PiE;
  if (sup > lagrange * (1.0 + 1e-12) || lagrange > simple * (1.0 + 1e-12)) {
    throw std::logic_error("normal_scale_distance: closed-form bound violated");
  }
  return {sup, x_star, lagrange, simple};
}

double normal_shift_distance(double a) {
  if (!std::isfinite(a)) throw DomainError("normal_shift_distance: non-finite shift");
  const double d = 2.0 * std_normal_cdf(std::fabs(a) / 2.0) - 1.0;
  if (d > std::fabs(a) * kInvSqrt2Pi * (1.0 + 1e-12) + 1e-300) {
    throw std::logic_error("normal_shift_distance: linear bound violated");
  }
  return d;
}

double lemma4_B(double A) {
  if (!(A > 0.0 && A < 0.5)) throw DomainError("lemma4_B: A must lie in (0, 1/2)");
  const double s = std::sqrt(1.0 - 2.0 * A);
  return 2.0 / ((1.0 + s) * s);
}

}  // namespace rsbound
