#pragma once

// Reproducible simulation of random sums. Replications are generated in
// blocks of kBlockSize, each block by its own std::mt19937_64 seeded with
// splitmix64(seed + (block + 1) * 0x9E3779B97F4A7C15), so the sample does not
// depend on the number of threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rsbound/counting.hpp"
#include "rsbound/dists.hpp"

namespace rsbound {

inline constexpr std::size_t kBlockSize = 65536;
inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64-blocks";

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t block_seed(std::uint64_t seed, std::size_t block);

/// m draws of S_N in replication order. threads == 0 uses the hardware concurrency.
std::vector<double> sample_random_sum(const SummandDistribution& d, const CountingLaw& law, std::uint64_t seed,
                                      std::size_t m, unsigned threads = 0);

/// sup_x |F_m(x) - G(x / normalization)| for the empirical distribution
/// function F_m, taken over both one-sided limits at every sample value.
double empirical_kolmogorov_distance(std::vector<double> sample, const std::function<double(double)>& limit_cdf,
                                     double normalization);

/// sqrt(ln(2 / delta) / (2 m)).
double dkw_margin(std::size_t m, double delta);

}  // namespace rsbound
