#pragma once

// Exact distributions of random sums of lattice summands, used as the
// brute-force reference for the bounds.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rsbound/counting.hpp"
#include "rsbound/dists.hpp"

namespace rsbound {

/// Masses on the points origin + i * step.
struct LatticeDistribution {
  double origin = 0.0;
  double step = 1.0;
  std::vector<double> masses;

  double value(std::size_t i) const { return origin + static_cast<double>(i) * step; }
  double total_mass() const;
  /// Mass at the lattice point nearest to x (0 off the lattice range).
  double mass_at(double x) const;
};

/// Common lattice of the atoms of d: integer offsets relative to a step
/// found by rational reconstruction. UnsupportedError when none exists.
struct IntegerLattice {
  double step = 1.0;
  long long min_index = 0;
  std::vector<double> masses;  // index min_index + i
};
IntegerLattice integer_lattice(const SummandDistribution& d);

struct ExactSumOptions {
  double tail_tol = 1e-12;
  std::size_t cell_budget = 20'000'000;
};

struct ExactSum {
  LatticeDistribution law;
  double mass_deficit = 0.0;  // P(N > K*), at most tail_tol
  int terms = 0;              // K*
};

/// sum_{k <= K*} P(N = k) * (k-fold convolution of d). ResourceError when
/// K* * span exceeds the cell budget.
ExactSum exact_random_sum(const SummandDistribution& d, const CountingLaw& law, const ExactSumOptions& opt = {});

/// Max pmf difference between the Poisson-binomial random sum and the sum of
/// the thinned summands (X_j with probability p_j, else 0). n <= 12.
double lemma6_check(const SummandDistribution& d, std::span<const double> p);

/// sup_x |F(x) - G(x / normalization)| for the step function F of s and a
/// continuous G, evaluated at both one-sided limits of every atom.
double kolmogorov_distance_exact(const LatticeDistribution& s, const std::function<double(double)>& limit_cdf,
                                 double normalization);

}  // namespace rsbound
