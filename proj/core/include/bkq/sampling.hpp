#ifndef BKQ_SAMPLING_HPP
#define BKQ_SAMPLING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "bkq/distribution.hpp"
#include "bkq/rng.hpp"

namespace bkq {

// One replication's i.i.d. draws, unsorted. Regenerating with the same
// seed path reproduces the values bit-exactly.
struct Sample {
  std::vector<double> values;
  SeedPath seed_path;

  std::size_t n() const { return values.size(); }
};

// Inverse-transform sample of size n. Throws domain_error for n == 0.
Sample sample_iid(const DistributionModel& model, std::size_t n, const SeedPath& path);

// Same draw sequence written into caller-owned storage (out.size() values).
void fill_iid(const DistributionModel& model, std::span<double> out, const SeedPath& path);

// k-th smallest value, 1 <= k <= n. Selection runs in expected O(n); the
// input is not modified. Duplicates are allowed and resolved by value.
double kth_order_statistic(const Sample& sample, std::size_t k);

// In-place variant: reorders `values` around position k-1 (nth_element).
double kth_order_statistic_inplace(std::span<double> values, std::size_t k);

// Left-continuous empirical inverse F_n^-1(k/n) = X_{k:n}.
double empirical_quantile(const Sample& sample, std::size_t k);
// Accepts p only of the exact form k/n; otherwise throws domain_error.
double empirical_quantile(const Sample& sample, double p);

// Exact count form of F_n(x) = #{i : X_i <= x} / n (weak inequality).
struct EcdfCount {
  std::uint64_t count = 0;
  std::uint64_t n = 0;
  double value() const { return static_cast<double>(count) / static_cast<double>(n); }
};
EcdfCount empirical_cdf_at(const Sample& sample, double x);
std::uint64_t count_at_most(std::span<const double> values, double x);

// Direct construction for the conditional law of the lowest k uniform order
// statistics given that exactly k of n points fall below alpha: k i.i.d.
// Uniform(0, alpha) draws, sorted. Throws domain_error for k > n.
std::vector<double> conditional_uniform_order_stats(std::size_t n, double alpha, std::size_t k,
                                                    const SeedPath& path);

// Ground-truth sampler for the same law: draws full Uniform(0,1) samples of
// size n and keeps the first whose count below alpha equals k, returning its
// lowest k order statistics. Throws retry_budget_error when max_tries
// consecutive samples all miss the target count.
std::vector<double> rejection_conditional_sampler(std::size_t n, double alpha, std::size_t k,
                                                  const SeedPath& path,
                                                  std::size_t max_tries = 100000);

}  // namespace bkq

#endif  // BKQ_SAMPLING_HPP
