#pragma once

// Lindeberg fraction L_n(eps), truncated Lyapunov fraction M_n(eps) and the
// ratio gamma = M_n(1) / L_n(1), plus the moment and pmf checks built on them.

#include <span>
#include <vector>

#include "rsbound/dists.hpp"

namespace rsbound {

struct FunctionalValues {
  int n = 0;
  double epsilon = 1.0;
  double L = 0.0;
  double M = 0.0;
  double B_n = 0.0;
  double gamma = 0.0;  // M / L, +inf when L == 0
};

/// n i.i.d. copies of d.
FunctionalValues functionals_iid(const SummandDistribution& d, int n, double eps);

/// Independent, non-identically distributed summands. Throws UsageError on an empty list.
FunctionalValues functionals_hetero(std::span<const SummandDistribution> ds, double eps);

/// [L(eps) + M(eps)] - [L(1) + M(1)]; nonnegative up to rounding.
double lemma1_gap(const SummandDistribution& d, int n, double eps);
double lemma1_gap(std::span<const SummandDistribution> ds, double eps);

struct Lemma2Result {
  double third_moment_sum = 0.0;  // sum_i E|Y_i(x) - E Y_i(x)|^3
  double k_bound = 0.0;           // K M_n(1+x)
  double p_bound = 0.0;           // p M_n(1+x) + (5-p) L_n(1+x) / (1+x)
  double variance = 0.0;          // D W_n(x)
  double variance_floor = 0.0;    // 1 - 2 L_n(1+x)
  double second_moment_sum = 0.0; // sum_i E Y_i(x)^2, at most 1
  bool moment_ok = false;         // statement 1
  bool variance_ok = false;       // statement 2
  bool pass() const { return moment_ok && variance_ok; }
};

/// Exact enumeration over discrete summands; UnsupportedError otherwise.
/// Requires x >= 0 and 1 <= p <= K.
Lemma2Result lemma2_check(std::span<const SummandDistribution> ds, double x, double p);

}  // namespace rsbound
