#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bkq/remainder.hpp"
#include "bkq/sampling.hpp"

namespace {

std::vector<double> uniform_values(std::size_t n) {
  bkq::CounterRng rng(1234);
  std::vector<double> v(n);
  for (double& x : v) x = rng.next_unit();
  return v;
}

void BM_SampleGumbel(benchmark::State& state) {
  const auto model = bkq::DistributionModel::gumbel();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> out(n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    bkq::fill_iid(model, out, bkq::SeedPath{1, 0, n, rep++});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * n);
}
BENCHMARK(BM_SampleGumbel)->Arg(1 << 14)->Arg(1 << 20);

void BM_SelectionVsSort(benchmark::State& state) {
  const auto base = uniform_values(static_cast<std::size_t>(state.range(0)));
  const std::size_t k = base.size() / 2;
  const bool use_sort = state.range(1) == 1;
  for (auto _ : state) {
    auto copy = base;
    double q;
    if (use_sort) {
      std::sort(copy.begin(), copy.end());
      q = copy[k - 1];
    } else {
      q = bkq::kth_order_statistic_inplace(copy, k);
    }
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_SelectionVsSort)->Args({1 << 20, 0})->Args({1 << 20, 1});

void BM_RemainderRow(benchmark::State& state) {
  const auto model = bkq::DistributionModel::gumbel();
  const auto G = bkq::SmoothFunctional::power_int(0);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto k = static_cast<std::uint64_t>(
      std::ceil(std::pow(static_cast<double>(n), 0.7)));
  const auto terms = bkq::precompute_grid_point(model, G, n, k, bkq::BoundParams{}, 2001);
  std::vector<double> scratch(n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const bkq::SeedPath path{1, 0, n, rep++};
    bkq::fill_iid(model, scratch, path);
    const auto row = bkq::evaluate_remainders(scratch, G, terms, path, true, true);
    benchmark::DoNotOptimize(row.r2);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * n);
}
BENCHMARK(BM_RemainderRow)->Arg(1 << 16)->Arg(1 << 20);

void BM_PsiModulus(benchmark::State& state) {
  const auto model = bkq::DistributionModel::gumbel();
  const auto G = bkq::SmoothFunctional::power_int(0);
  for (auto _ : state) {
    const double v =
        bkq::psi(model, G, 0.01, 10000, 1000000, 2.0, bkq::LogMode::LogR,
                 static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_PsiModulus)->Arg(2001)->Arg(200001);

}  // namespace

BENCHMARK_MAIN();
