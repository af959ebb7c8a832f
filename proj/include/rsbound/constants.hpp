#pragma once

// Published constants and the minimax machinery that turns them into the
// gamma-dependent constants C_1(gamma) .. C_4(gamma).

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rsbound {

namespace constants {
/// Berry-Esseen constant, non-identically distributed summands.
inline constexpr double kBerryEsseenGeneral = 0.5583;
/// Berry-Esseen constant, identically distributed summands.
inline constexpr double kBerryEsseenIid = 0.4690;
/// Berry-Esseen constant for Poisson random sums.
inline constexpr double kBerryEsseenPoisson = 0.3031;
/// Lower-bound constant as it enters the minimax (literal, not 0.54093...).
inline constexpr double kMinimaxLowerConstant = 0.541;
/// Universal constant for non-identical summands and Poisson-binomial sums.
inline constexpr double kUniversalGeneral = 1.8627;
/// Universal constant for identically distributed summands.
inline constexpr double kUniversalIid = 1.8546;
/// (17 + 7 sqrt 7) / 27, bound on E|Y - EY|^3 / E|Y|^3.
inline const double kZolotarevK = (17.0 + 7.0 * std::sqrt(7.0)) / 27.0;

struct Entry {
  const char* name;
  double value;
};
/// Every hard-coded constant, in a fixed order.
std::span<const Entry> registry();
/// FNV-1a 64 over the registry rendered as "name=value;" pairs (17 significant digits).
std::uint64_t registry_hash();
}  // namespace constants

enum class Variant : int { General = 1, IidGeneral = 2, Symmetric = 3, IidSymmetric = 4 };

struct VariantTraits {
  double be_constant;
  bool uses_min_term;   // min{K gamma, gamma + 4} instead of gamma
  bool has_shift_term;  // 1/sqrt(2 pi) term from a nonzero E W_n
};

VariantTraits traits(Variant v);
/// Throws UsageError outside 1..4.
Variant variant_from_int(int id);

/// H_v(gamma, A) for 0 < A < 1/2.
double h_function(Variant v, double gamma, double A);

struct MinimaxPoint {
  double A;      // root of A * H(gamma, A) = 0.541
  double value;  // common value H(gamma, A) / (1 + gamma) at the root
};

/// Pointwise minimax over A of max{H/(1+gamma), 0.541/(A(1+gamma))},
/// located by bisection to |dA| <= 1e-12.
MinimaxPoint minimax_point(Variant v, double gamma);
double minimax_value(Variant v, double gamma);

/// Upper bound for C_v(gamma) valid for every gamma' >= gamma:
/// sup_{gamma' >= gamma} minimax_value(v, gamma'). Nonincreasing in gamma.
/// gamma = +inf returns the Berry-Esseen constant of the variant.
double c_gamma(Variant v, double gamma);

struct ConstantTableEntry {
  double gamma_threshold;  // 1e9 stands for the gamma -> infinity row
  double computed;         // unrounded c_gamma
  double bound;            // computed, rounded to 4 decimals
};

inline constexpr std::array<double, 9> kTableGammas = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e9};

/// Published table values, same row order as kTableGammas.
std::array<double, 9> published_table(Variant v);

std::vector<ConstantTableEntry> reproduce_table(Variant v);

/// Rounds to 4 decimals, half away from zero.
double round4(double x);

/// sup_{z > 0} |1/(1+z^2) - Phi(-z)| by golden-section search on (0, 20].
double lemma5_constant();

struct ScaleDistance {
  double sup;            // sup_x |Phi(q x) - Phi(x)|
  double argmax;         // x* = sqrt(ln q^2 / (q^2 - 1))
  double lagrange_bound; // sqrt((q-1) ln q / (pi (q+1))) exp(-min(1,q) ln q / (q^2-1))
  double simple_bound;   // (max{q, 1/q} - 1) / sqrt(2 pi e)
};

/// Throws DomainError for q <= 0; q == 1 gives all zeros.
ScaleDistance normal_scale_distance(double q);

/// sup_x |Phi(x + a) - Phi(x)| = 2 Phi(|a|/2) - 1.
double normal_shift_distance(double a);

/// B(A) = 2 / ((1 + sqrt(1 - 2A)) sqrt(1 - 2A)), 0 < A < 1/2.
double lemma4_B(double A);

}  // namespace rsbound
