#pragma once

// Summand distributions X with E X = 0, 0 < E X^2 < inf, and exact
// evaluators for the truncated moments consumed by every bound.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rsbound/quadrature.hpp"

namespace rsbound {

struct Atom {
  double value;
  double prob;
};

struct FiniteLattice {
  std::vector<Atom> atoms;
};
struct Rademacher {};
struct UniformSymmetric {
  double halfwidth;
};
struct TwoPointSymmetric {
  double scale;
};
/// Density (alpha/2) s^alpha |x|^{-alpha-1} on |x| >= s. Finite variance needs
/// alpha > 2; for alpha <= 3 the third absolute moment is infinite.
struct SymmetricPareto {
  double tail_index;
  double scale;
};

class SummandDistribution {
 public:
  using Family =
      std::variant<FiniteLattice, Rademacher, UniformSymmetric, TwoPointSymmetric, SymmetricPareto>;

  static SummandDistribution rademacher();
  static SummandDistribution uniform(double halfwidth);
  static SummandDistribution two_point(double scale);
  static SummandDistribution pareto(double tail_index, double scale);
  /// Merges duplicate values, drops zero-mass atoms, recenters a mean within
  /// 1e-9 of zero and rejects anything else.
  static SummandDistribution lattice(std::vector<Atom> atoms);
  /// Two columns `value,probability`; blank lines, `#` comments and a
  /// non-numeric header line are skipped.
  static SummandDistribution parse_lattice_csv(std::istream& in);
  static SummandDistribution load_lattice_csv(const std::filesystem::path& path);

  const Family& family() const { return family_; }
  double variance() const { return sigma2_; }
  double sigma() const { return std::sqrt(sigma2_); }
  bool is_discrete() const { return !atoms_.empty(); }
  bool is_symmetric() const;
  /// Support atoms sorted by value; throws UnsupportedError for continuous families.
  std::span<const Atom> atoms() const;
  /// Law of c X for c > 0.
  SummandDistribution scaled(double c) const;
  std::string label() const;

  double sample(std::mt19937_64& rng) const;

  /// E f(X); exact sum for discrete families, quadrature otherwise.
  template <class F>
  double expect(F&& f, double tol = 1e-12) const;

 private:
  SummandDistribution(Family family, std::vector<Atom> atoms);

  Family family_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double sigma2_ = 0.0;
};

double variance(const SummandDistribution& d);

/// E X^2 1(|X| >= t).
double trunc_second_moment_tail(const SummandDistribution& d, double t);
/// E X^2 1(|X| < t); complements the tail moment to sigma^2.
double trunc_second_moment_core(const SummandDistribution& d, double t);
/// E |X|^3 1(|X| < t).
double trunc_third_abs_moment_core(const SummandDistribution& d, double t);
/// E |X|^3, +inf when it diverges.
double third_abs_moment(const SummandDistribution& d);

/// True when |v| lies in the tail region {|x| >= t}. Atoms within a few ulps
/// of t are counted in the tail so that thresholds such as sigma*sqrt(n)
/// survive rounding.
inline bool in_tail(double abs_v, double t) { return abs_v >= t * (1.0 - 1e-14); }

class GrowthFunction {
 public:
  GrowthFunction(std::function<double(double)> evaluator, std::string label)
      : evaluator_(std::move(evaluator)), label_(std::move(label)) {}

  static GrowthFunction abs();
  static GrowthFunction min_abs(double cap);
  /// |x|^delta, delta in (0, 1].
  static GrowthFunction power(double delta);
  static GrowthFunction square();
  /// Parses "abs", "min_abs:C", "power:D", "square".
  static GrowthFunction parse(const std::string& spec);

  double operator()(double x) const { return evaluator_(x); }
  const std::string& label() const { return label_; }

 private:
  std::function<double(double)> evaluator_;
  std::string label_;
};

/// E X^2 g(X), +inf when the integral diverges.
double weighted_second_moment(const SummandDistribution& d, const GrowthFunction& g);

struct GrowthCheck {
  bool pass = true;
  std::string violation;  // empty on pass
  double at = 0.0;        // first grid point exhibiting the violation
};

/// Logarithmic grid 1e-6 .. 1e6, 200 points.
std::vector<double> default_growth_grid();

/// Best-effort check of the class properties (even, positive, g and x/g(x)
/// nondecreasing) on `grid` merged with the default grid.
GrowthCheck verify_growth_function(const GrowthFunction& g, std::span<const double> grid);

// ---------------------------------------------------------------------------

template <class F>
double SummandDistribution::expect(F&& f, double tol) const {
  if (is_discrete()) {
    double sum = 0.0;
    for (const Atom& a : atoms_) sum += a.prob * f(a.value);
    return sum;
  }
  if (const auto* u = std::get_if<UniformSymmetric>(&family_)) {
    const double a = u->halfwidth;
    auto sym = [&](double x) { return 0.5 * (f(x) + f(-x)); };
    return quad::integrate(sym, 0.0, a, tol) / a;
  }
  const auto& p = std::get<SymmetricPareto>(family_);
  // |X| = s U^{-1/alpha} with U uniform on (0, 1].
  auto on_unit = [&](double u) {
    const double x = p.scale * std::pow(u, -1.0 / p.tail_index);
    return 0.5 * (f(x) + f(-x));
  };
  return quad::integrate_endpoint_singular(on_unit, 0.0, 1.0, tol);
}

}  // namespace rsbound
