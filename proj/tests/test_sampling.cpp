#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "bkq/errors.hpp"
#include "bkq/sampling.hpp"
#include "bkq/stats.hpp"

using namespace bkq;

TEST_CASE("sampling is a pure function of the seed path") {
  const auto model = DistributionModel::gumbel();
  const SeedPath path{7, 0, 1000, 3};
  const auto a = sample_iid(model, 1000, path);
  const auto b = sample_iid(model, 1000, path);
  CHECK(a.values == b.values);
  const auto c = sample_iid(model, 1000, SeedPath{7, 0, 1000, 4});
  CHECK(a.values != c.values);
}

TEST_CASE("uniform draws are reproducible and inside (0,1)") {
  const auto s = sample_iid(DistributionModel::uniform01(), 5, SeedPath{1, 2, 5, 0});
  REQUIRE(s.n() == 5);
  for (const double x : s.values) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("gumbel sample mean concentrates at Euler-Mascheroni") {
  constexpr double kEulerMascheroni = 0.5772156649015329;
  const auto s = sample_iid(DistributionModel::gumbel(), 10000, SeedPath{42, 0, 10000, 0});
  double mean = 0.0;
  for (const double x : s.values) mean += x;
  mean /= static_cast<double>(s.n());
  // five standard errors, Var = pi^2/6
  const double tol = 5.0 * std::sqrt(std::numbers::pi * std::numbers::pi / 6.0 / 10000.0);
  CHECK(std::abs(mean - kEulerMascheroni) <= tol);
}

TEST_CASE("empty samples are rejected") {
  CHECK_THROWS_AS((void)sample_iid(DistributionModel::uniform01(), 0, SeedPath{}), domain_error);
}

TEST_CASE("kth order statistic pins and bounds") {
  Sample s;
  s.values = {0.9, 0.2, 0.5};
  CHECK(kth_order_statistic(s, 2) == 0.5);
  CHECK(kth_order_statistic(s, 1) == 0.2);
  CHECK(kth_order_statistic(s, 3) == 0.9);
  CHECK_THROWS_AS((void)kth_order_statistic(s, 0), domain_error);
  CHECK_THROWS_AS((void)kth_order_statistic(s, 4), domain_error);
}

TEST_CASE("selection agrees exactly with the sort oracle") {
  CounterRng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_u64() % 200);
    Sample s;
    s.values.resize(n);
    for (double& x : s.values) x = rng.next_unit();
    const std::size_t k = 1 + static_cast<std::size_t>(rng.next_u64() % n);
    std::vector<double> sorted(s.values);
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(kth_order_statistic(s, k) == sorted[k - 1]);
  }
  // one large instance
  Sample big;
  big.values.resize(100000);
  for (double& x : big.values) x = rng.next_unit();
  std::vector<double> sorted(big.values);
  std::sort(sorted.begin(), sorted.end());
  for (const std::size_t k : {std::size_t{1}, std::size_t{31337}, std::size_t{100000}}) {
    CHECK(kth_order_statistic(big, k) == sorted[k - 1]);
  }
}

TEST_CASE("empirical quantile accepts exactly p = k/n") {
  Sample s;
  s.values = {0.2, 0.5, 0.9};
  CHECK(empirical_quantile(s, 2.0 / 3.0) == 0.5);
  CHECK(empirical_quantile(s, 1.0) == 0.9);
  CHECK_THROWS_AS((void)empirical_quantile(s, 0.3), domain_error);
  CHECK_THROWS_AS((void)empirical_quantile(s, 0.0), domain_error);
}

TEST_CASE("median of a large uniform sample is near 1/2") {
  const auto s = sample_iid(DistributionModel::uniform01(), 10000, SeedPath{5, 0, 10000, 1});
  CHECK(std::abs(empirical_quantile(s, 0.5) - 0.5) < 0.05);
}

TEST_CASE("empirical cdf counts with weak inequality") {
  Sample s;
  s.values = {0.2, 0.5, 0.9};
  CHECK(empirical_cdf_at(s, 2.0 / 3.0).count == 2);
  CHECK(empirical_cdf_at(s, 2.0 / 3.0).value() == doctest::Approx(2.0 / 3.0));
  CHECK(empirical_cdf_at(s, 0.1).count == 0);
  CHECK(empirical_cdf_at(s, 0.5).count == 2);  // boundary value included
  CHECK(empirical_cdf_at(s, 1.5).count == 3);
}

TEST_CASE("F_n(F_n^-1(k/n)) >= k/n, with equality for distinct values") {
  CounterRng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 40);
    Sample s;
    s.values.resize(n);
    const bool force_ties = trial % 2 == 0;
    for (double& x : s.values) {
      x = force_ties ? static_cast<double>(rng.next_u64() % 5) / 5.0 : rng.next_unit();
    }
    const std::size_t k = 1 + static_cast<std::size_t>(rng.next_u64() % n);
    const double q = kth_order_statistic(s, k);
    const auto count = empirical_cdf_at(s, q).count;
    REQUIRE(count >= k);
    if (!force_ties) REQUIRE(count == k);
  }
}

TEST_CASE("conditional uniform order statistics basics") {
  CHECK(conditional_uniform_order_stats(10, 0.3, 0, SeedPath{1, 1, 10, 0}).empty());
  const auto one = conditional_uniform_order_stats(10, 0.5, 1, SeedPath{1, 1, 10, 1});
  REQUIRE(one.size() == 1);
  CHECK(one[0] > 0.0);
  CHECK(one[0] < 0.5);
  const auto full = conditional_uniform_order_stats(8, 0.9, 8, SeedPath{1, 1, 8, 2});
  REQUIRE(full.size() == 8);
  CHECK(std::is_sorted(full.begin(), full.end()));
  for (const double x : full) CHECK(x < 0.9);
  CHECK_THROWS_AS((void)conditional_uniform_order_stats(4, 0.3, 5, SeedPath{}), domain_error);
}

TEST_CASE("rejection sampler basics and retry budget") {
  const auto one = rejection_conditional_sampler(1, 0.5, 1, SeedPath{2, 2, 1, 0});
  REQUIRE(one.size() == 1);
  CHECK(one[0] <= 0.5);
  const auto three = rejection_conditional_sampler(10, 0.3, 3, SeedPath{2, 2, 10, 1});
  REQUIRE(three.size() == 3);
  CHECK(std::is_sorted(three.begin(), three.end()));
  for (const double x : three) CHECK(x <= 0.3);
  CHECK_THROWS_AS(
      (void)rejection_conditional_sampler(10, 0.001, 10, SeedPath{2, 2, 10, 2}, 50),
      retry_budget_error);
}

TEST_CASE("direct and rejection conditional samplers agree in law") {
  // Two-sample KS per marginal, 1e4 draws, against the asymptotic 1%
  // critical value 1.63 sqrt(2/1e4).
  struct Config {
    std::size_t n;
    double alpha;
    std::size_t k;
  };
  const std::size_t draws = 10000;
  const double critical = 1.63 * std::sqrt(2.0 / static_cast<double>(draws));
  for (const auto& cfg : {Config{20, 0.3, 6}, Config{50, 0.5, 25}, Config{30, 0.8, 24}}) {
    CAPTURE(cfg.n);
    std::vector<std::vector<double>> direct(cfg.k, std::vector<double>(draws));
    std::vector<std::vector<double>> rejected(cfg.k, std::vector<double>(draws));
    for (std::size_t d = 0; d < draws; ++d) {
      const auto a = conditional_uniform_order_stats(cfg.n, cfg.alpha, cfg.k,
                                                     SeedPath{2024, 1, cfg.n, d});
      const auto b =
          rejection_conditional_sampler(cfg.n, cfg.alpha, cfg.k, SeedPath{2024, 2, cfg.n, d});
      for (std::size_t i = 0; i < cfg.k; ++i) {
        direct[i][d] = a[i];
        rejected[i][d] = b[i];
      }
    }
    for (std::size_t i = 0; i < cfg.k; ++i) {
      CAPTURE(i);
      CHECK(ks_two_sample(direct[i], rejected[i]) < critical);
    }
  }
}

TEST_CASE("marginals of the direct sampler follow the scaled Beta law") {
  const std::size_t n = 30, k = 10, draws = 5000;
  const double alpha = 0.4;
  for (const std::size_t i : {std::size_t{1}, std::size_t{5}, std::size_t{10}}) {
    std::vector<double> marginal(draws);
    for (std::size_t d = 0; d < draws; ++d) {
      marginal[d] =
          conditional_uniform_order_stats(n, alpha, k, SeedPath{77, 1, n, d})[i - 1] / alpha;
    }
    const double stat = ks_one_sample(marginal, [&](double x) {
      return beta_cdf(static_cast<double>(i), static_cast<double>(k - i + 1), x);
    });
    CHECK(stat < ks_one_sample_critical(draws, 0.01));
  }
}
