#include "rsbound/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rsbound/errors.hpp"

namespace rsbound {
namespace {

constexpr long long kMaxDenominator = 10000;
constexpr long long kMaxCommonDenominator = 1'000'000;

// Best rational approximation p/q of x with q <= kMaxDenominator, by continued fractions.
bool rationalize(double x, long long& p, long long& q) {
  const double tol = 1e-9 * std::max(1.0, std::fabs(x));
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(rem);
    if (std::fabs(a) > 1e15) return false;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > kMaxDenominator) return false;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
      p = h1;
      q = k1;
      return true;
    }
    const double frac = rem - a;
    if (frac < 1e-15) return false;
    rem = 1.0 / frac;
  }
  return false;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double w = b[j];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < a.size(); ++i) out[i + j] += a[i] * w;
  }
  return out;
}

}  // namespace

double LatticeDistribution::total_mass() const {
  long double s = 0.0L;
  for (double m : masses) s += m;
  return static_cast<double>(s);
}

double LatticeDistribution::mass_at(double x) const {
  const double pos = (x - origin) / step;
  const double r = std::round(pos);
  if (r < 0.0 || r >= static_cast<double>(masses.size()) || std::fabs(pos - r) > 1e-6) return 0.0;
  return masses[static_cast<std::size_t>(r)];
}

IntegerLattice integer_lattice(const SummandDistribution& d) {
  const auto atoms = d.atoms();
  double unit = 0.0;
  double vmax = 0.0;
  for (const Atom& a : atoms) {
    const double av = std::fabs(a.value);
    vmax = std::max(vmax, av);
    if (av > 0.0 && (unit == 0.0 || av < unit)) unit = av;
  }
  if (unit == 0.0) throw UnsupportedError("integer_lattice: distribution has no nonzero atom");

  long long denom = 1;
  for (const Atom& a : atoms) {
    long long p = 0, q = 1;
    if (!rationalize(a.value / unit, p, q)) {
      throw UnsupportedError("atoms of " + d.label() + " do not lie on a common lattice");
    }
    denom = std::lcm(denom, q);
    if (denom > kMaxCommonDenominator) {
      throw UnsupportedError("atoms of " + d.label() + " need too fine a common lattice");
    }
  }
  double step = unit / static_cast<double>(denom);
  std::vector<long long> idx;
  idx.reserve(atoms.size());
  long long g = 0;
  for (const Atom& a : atoms) {
    const long long i = std::llround(a.value / step);
    idx.push_back(i);
    g = std::gcd(g, i < 0 ? -i : i);
  }
  for (auto& i : idx) i /= g;
  step *= static_cast<double>(g);
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (std::fabs(atoms[j].value - static_cast<double>(idx[j]) * step) > 1e-9 * vmax) {
      throw UnsupportedError("atoms of " + d.label() + " do not lie on a common lattice");
    }
  }
  const auto [lo, hi] = std::minmax_element(idx.begin(), idx.end());
  IntegerLattice out;
  out.step = step;
  out.min_index = std::min(*lo, 0LL);
  const long long top = std::max(*hi, 0LL);
  out.masses.assign(static_cast<std::size_t>(top - out.min_index + 1), 0.0);
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    out.masses[static_cast<std::size_t>(idx[j] - out.min_index)] += atoms[j].prob;
  }
  return out;
}

ExactSum exact_random_sum(const SummandDistribution& d, const CountingLaw& law, const ExactSumOptions& opt) {
  if (!d.is_discrete()) {
    throw UnsupportedError("exact random sums need a lattice summand; " + d.label() + " is continuous");
  }
  const IntegerLattice base = integer_lattice(d);
  const std::size_t width = base.masses.size() - 1;

  const int K = law.truncation_point(opt.tail_tol);
  const double cells = static_cast<double>(K) * static_cast<double>(width) + 1.0;
  if (cells > static_cast<double>(opt.cell_budget)) {
    throw ResourceError("exact random sum for " + law.label() + " needs " + std::to_string(cells) +
                        " lattice cells (budget " + std::to_string(opt.cell_budget) + "); use Monte Carlo");
  }
  const std::vector<double> pmf = law.pmf_table(opt.tail_tol);

  ExactSum out;
  out.terms = K;
  out.law.step = base.step;
  out.law.origin = static_cast<double>(K) * static_cast<double>(base.min_index) * base.step;
  out.law.masses.assign(static_cast<std::size_t>(cells), 0.0);

  // The k-fold sum occupies indices k*min_index .. k*max_index, i.e. offset
  // (K - k) * (-min_index) into the result array.
  const std::size_t shift = static_cast<std::size_t>(-base.min_index);
  std::vector<double> cur{1.0};
  for (int k = 0; k <= K; ++k) {
    const double w = pmf[static_cast<std::size_t>(k)];
    if (w > 0.0) {
      const std::size_t offset = static_cast<std::size_t>(K - k) * shift;
      for (std::size_t i = 0; i < cur.size(); ++i) out.law.masses[offset + i] += w * cur[i];
    }
    if (k < K) cur = convolve(cur, base.masses);
  }
  out.mass_deficit = law.tail(K);
  return out;
}

double lemma6_check(const SummandDistribution& d, std::span<const double> p) {
  if (p.empty() || p.size() > 12) throw UsageError("lemma6_check: need 1 to 12 probabilities");
  const auto law = CountingLaw::poisson_binomial(std::vector<double>(p.begin(), p.end()));
  ExactSumOptions opt;
  opt.tail_tol = 0.0;
  const ExactSum left = exact_random_sum(d, law, opt);

  const IntegerLattice base = integer_lattice(d);
  const std::size_t zero = static_cast<std::size_t>(-base.min_index);
  std::vector<double> right{1.0};
  for (double pj : p) {
    std::vector<double> thinned(base.masses.size());
    for (std::size_t i = 0; i < thinned.size(); ++i) thinned[i] = pj * base.masses[i];
    thinned[zero] += 1.0 - pj;
    right = convolve(right, thinned);
  }
  if (right.size() != left.law.masses.size()) {
    throw std::logic_error("lemma6_check: lattice ranges disagree");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < right.size(); ++i) {
    worst = std::max(worst, std::fabs(right[i] - left.law.masses[i]));
  }
  return worst;
}

double kolmogorov_distance_exact(const LatticeDistribution& s, const std::function<double(double)>& limit_cdf,
                                 double normalization) {
  if (!(normalization > 0.0) || !std::isfinite(normalization)) {
    throw DomainError("kolmogorov_distance_exact: normalization must be positive");
  }
  long double cum = 0.0L;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.masses.size(); ++i) {
    const double m = s.masses[i];
    if (m == 0.0) continue;
    const double g = limit_cdf(s.value(i) / normalization);
    const double below = static_cast<double>(cum);
    cum += m;
    const double at = static_cast<double>(cum);
    worst = std::max({worst, std::fabs(below - g), std::fabs(at - g)});
  }
  return worst;
}

}  // namespace rsbound
