#include "bkq/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "bkq/errors.hpp"

namespace bkq {

Sample sample_iid(const DistributionModel& model, std::size_t n, const SeedPath& path) {
  if (n == 0) throw domain_error("sample_iid: n must be >= 1");
  Sample s;
  s.seed_path = path;
  s.values.resize(n);
  fill_iid(model, s.values, path);
  return s;
}

void fill_iid(const DistributionModel& model, std::span<double> out, const SeedPath& path) {
  CounterRng rng(path);
  for (double& x : out) x = model.quantile(rng.next_unit());
}

double kth_order_statistic_inplace(std::span<double> values, std::size_t k) {
  if (k < 1 || k > values.size()) {
    throw domain_error("kth_order_statistic: k=" + std::to_string(k) +
                       " outside [1, n=" + std::to_string(values.size()) + "]");
  }
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
  return values[k - 1];
}

double kth_order_statistic(const Sample& sample, std::size_t k) {
  std::vector<double> scratch(sample.values);
  return kth_order_statistic_inplace(scratch, k);
}

double empirical_quantile(const Sample& sample, std::size_t k) {
  return kth_order_statistic(sample, k);
}

double empirical_quantile(const Sample& sample, double p) {
  const double n = static_cast<double>(sample.n());
  const double kd = p * n;
  const auto k = static_cast<std::uint64_t>(std::llround(kd));
  if (!(p > 0.0 && p <= 1.0) || std::abs(kd - static_cast<double>(k)) > 1e-9 || k < 1) {
    throw domain_error("empirical_quantile: p must be k/n with a positive integer k");
  }
  return kth_order_statistic(sample, static_cast<std::size_t>(k));
}

std::uint64_t count_at_most(std::span<const double> values, double x) {
  std::uint64_t c = 0;
  for (double v : values) c += (v <= x) ? 1 : 0;
  return c;
}

EcdfCount empirical_cdf_at(const Sample& sample, double x) {
  return EcdfCount{count_at_most(sample.values, x), sample.n()};
}

std::vector<double> conditional_uniform_order_stats(std::size_t n, double alpha, std::size_t k,
                                                    const SeedPath& path) {
  if (k > n) throw domain_error("conditional_uniform_order_stats: k > n");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw domain_error("conditional_uniform_order_stats: alpha must be in (0,1)");
  }
  CounterRng rng(path);
  std::vector<double> out(k);
  for (double& x : out) x = alpha * rng.next_unit();
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> rejection_conditional_sampler(std::size_t n, double alpha, std::size_t k,
                                                  const SeedPath& path, std::size_t max_tries) {
  if (k > n) throw domain_error("rejection_conditional_sampler: k > n");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw domain_error("rejection_conditional_sampler: alpha must be in (0,1)");
  }
  CounterRng rng(path);
  std::vector<double> draw(n);
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    std::size_t below = 0;
    for (double& x : draw) {
      x = rng.next_unit();
      below += (x <= alpha) ? 1 : 0;
    }
    if (below != k) continue;
    std::partial_sort(draw.begin(), draw.begin() + k, draw.end());
    return std::vector<double>(draw.begin(), draw.begin() + k);
  }
  throw retry_budget_error("rejection_conditional_sampler: no sample with count " +
                           std::to_string(k) + " in " + std::to_string(max_tries) + " tries");
}

}  // namespace bkq
