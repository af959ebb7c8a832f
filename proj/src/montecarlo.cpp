#include "rsbound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "rsbound/errors.hpp"

namespace rsbound {
namespace {

// Draws S_N for one replication. Discrete summands use multinomial counts
// so that the cost does not grow with N.
class SumSampler {
 public:
  SumSampler(const SummandDistribution& d, const CountingLaw& law) : d_(d), law_(law) {
    if (d.is_discrete()) {
      for (const Atom& a : d.atoms()) {
        values_.push_back(a.value);
        probs_.push_back(a.prob);
      }
    }
  }

  double operator()(std::mt19937_64& rng) const {
    const long long n = law_.sample(rng);
    if (values_.empty()) {
      double s = 0.0;
      for (long long i = 0; i < n; ++i) s += d_.sample(rng);
      return s;
    }
    long long remaining = n;
    double mass_left = 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size() && remaining > 0; ++i) {
      const double q = std::clamp(probs_[i] / mass_left, 0.0, 1.0);
      const long long c = std::binomial_distribution<long long>(remaining, q)(rng);
      s += static_cast<double>(c) * values_[i];
      remaining -= c;
      mass_left -= probs_[i];
    }
    if (remaining > 0) s += static_cast<double>(remaining) * values_.back();
    return s;
  }

 private:
  const SummandDistribution& d_;
  const CountingLaw& law_;
  std::vector<double> values_;
  std::vector<double> probs_;
};

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::size_t block) {
  return splitmix64(seed + (static_cast<std::uint64_t>(block) + 1) * 0x9E3779B97F4A7C15ULL);
}

std::vector<double> sample_random_sum(const SummandDistribution& d, const CountingLaw& law, std::uint64_t seed,
                                      std::size_t m, unsigned threads) {
  if (m == 0) throw UsageError("sample_random_sum: need at least one replication");
  const SumSampler draw(d, law);
  std::vector<double> out(m);
  const std::size_t blocks = (m + kBlockSize - 1) / kBlockSize;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));

  auto run = [&](unsigned t) {
    for (std::size_t b = t; b < blocks; b += threads) {
      std::mt19937_64 rng(block_seed(seed, b));
      const std::size_t end = std::min(m, (b + 1) * kBlockSize);
      for (std::size_t i = b * kBlockSize; i < end; ++i) out[i] = draw(rng);
    }
  };
  if (threads == 1) {
    run(0);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        run(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double empirical_kolmogorov_distance(std::vector<double> sample, const std::function<double(double)>& limit_cdf,
                                     double normalization) {
  if (sample.empty()) throw UsageError("empirical_kolmogorov_distance: empty sample");
  if (!(normalization > 0.0) || !std::isfinite(normalization)) {
    throw DomainError("empirical_kolmogorov_distance: normalization must be positive");
  }
  std::sort(sample.begin(), sample.end());
  const double m = static_cast<double>(sample.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double g = limit_cdf(sample[i] / normalization);
    worst = std::max({worst, std::fabs(static_cast<double>(i) / m - g), std::fabs(static_cast<double>(j) / m - g)});
    i = j;
  }
  return worst;
}

double dkw_margin(std::size_t m, double delta) {
  if (m == 0) throw UsageError("dkw_margin: need at least one replication");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("dkw_margin: delta must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(m)));
}

}  // namespace rsbound
