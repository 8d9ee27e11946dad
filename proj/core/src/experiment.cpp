#include "bkq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "bkq/errors.hpp"
#include "bkq/sampling.hpp"

namespace bkq {

void ExperimentConfig::validate() const {
  if (replications < 1) throw config_error("config: replications must be >= 1");
  if (n_grid.empty()) throw config_error("config: n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw config_error("config: every n must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw config_error("config: n_grid must be strictly increasing");
    }
  }
  if (!want_linear && !want_integral) {
    throw config_error("config: at least one representation must be enabled");
  }
  bounds.validate();
  if (psi_grid_points < 3) throw config_error("config: psi_grid_points must be >= 3");
  if (fit_rates) {
    if (replications < 100) {
      throw config_error("config: rate fits need replications >= 100");
    }
    if (n_grid.size() < 3 || n_grid.back() < 8 * n_grid.front()) {
      throw config_error("config: rate fits need an n_grid spanning >= 3 octaves");
    }
  }
  for (const auto n : n_grid) {
    try {
      (void)schedule.k(n);
    } catch (const schedule_error& e) {
      throw config_error(std::string("config: schedule invalid: ") + e.what());
    }
  }
}

void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> abort{false};
  auto body = [&] {
    for (;;) {
      if (abort.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        abort.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

QuantileTriple abs_quantiles(std::vector<double> abs_values) {
  std::sort(abs_values.begin(), abs_values.end());
  QuantileTriple q;
  q.q50 = sorted_quantile(abs_values, 0.50);
  q.q90 = sorted_quantile(abs_values, 0.90);
  q.q99 = sorted_quantile(abs_values, 0.99);
  return q;
}

double exceed_fraction(const std::vector<RemainderSample>& rows, std::size_t begin,
                       std::size_t end, double (*magnitude)(const RemainderSample&),
                       double (*bound)(const RemainderSample&)) {
  std::size_t count = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (magnitude(rows[i]) > bound(rows[i])) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(end - begin);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();

  ExperimentReport report;
  const auto reps = static_cast<std::size_t>(config.replications);
  report.samples.resize(config.n_grid.size() * reps);

  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const std::uint64_t n = config.n_grid[gi];
    const std::uint64_t k = config.schedule.k(n);
    GridPointTerms terms;
    try {
      terms = precompute_grid_point(config.model, config.functional, n, k, config.bounds,
                                    config.psi_grid_points);
    } catch (const error& e) {
      throw error("n=" + std::to_string(n) + ": " + e.what());
    }

    RemainderSample* rows = report.samples.data() + gi * reps;
    parallel_for_index(reps, config.threads, [&](std::size_t rep) {
      const SeedPath path{config.seed, config.experiment_id, n, rep};
      try {
        thread_local std::vector<double> scratch;
        scratch.resize(n);
        fill_iid(config.model, scratch, path);
        rows[rep] = evaluate_remainders(scratch, config.functional, terms, path,
                                        config.want_linear, config.want_integral);
      } catch (const error& e) {
        throw error("n=" + std::to_string(n) + ", replication=" + std::to_string(rep) + ": " +
                    e.what());
      }
    });

    PerNRecord rec;
    rec.n = n;
    rec.k_n = k;
    rec.p_n = terms.p;
    rec.r_n = terms.r;
    rec.mean_psi = terms.psi_value;
    const std::size_t begin = gi * reps, end = begin + reps;
    if (config.want_linear) {
      std::vector<double> a;
      a.reserve(reps);
      for (std::size_t i = begin; i < end; ++i) a.push_back(std::abs(report.samples[i].r1));
      rec.abs_r1 = abs_quantiles(std::move(a));
      rec.exceed_delta1 = exceed_fraction(
          report.samples, begin, end, [](const RemainderSample& s) { return std::abs(s.r1); },
          [](const RemainderSample& s) { return s.delta1; });
      rec.exceed_delta1_hat = exceed_fraction(
          report.samples, begin, end, [](const RemainderSample& s) { return std::abs(s.r1); },
          [](const RemainderSample& s) { return s.delta1_hat; });
    }
    if (config.want_integral) {
      std::vector<double> a;
      a.reserve(reps);
      for (std::size_t i = begin; i < end; ++i) a.push_back(std::abs(report.samples[i].r2));
      rec.abs_r2 = abs_quantiles(std::move(a));
      rec.exceed_delta2 = exceed_fraction(
          report.samples, begin, end, [](const RemainderSample& s) { return std::abs(s.r2); },
          [](const RemainderSample& s) { return s.delta2; });
      rec.exceed_delta2_hat = exceed_fraction(
          report.samples, begin, end, [](const RemainderSample& s) { return std::abs(s.r2); },
          [](const RemainderSample& s) { return s.delta2_hat; });
    }
    report.per_n.push_back(rec);
  }

  if (config.fit_rates) {
    std::vector<std::pair<double, double>> pts1, pts2;
    for (const auto& rec : report.per_n) {
      pts1.emplace_back(static_cast<double>(rec.n), rec.abs_r1.q50);
      pts2.emplace_back(static_cast<double>(rec.n), rec.abs_r2.q50);
    }
    if (config.want_linear) report.fit_abs_r1_median = fit_rate(pts1);
    if (config.want_integral) report.fit_abs_r2_median = fit_rate(pts2);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

CalibrationResult calibrate_constants(const ExperimentConfig& config, std::uint64_t pilot_n,
                                      double quantile_level, int theorem) {
  if (!(quantile_level > 0.9 && quantile_level < 1.0)) {
    throw config_error("calibrate: quantile_level must be in (0.9, 1)");
  }
  if (theorem != 1 && theorem != 2) throw config_error("calibrate: theorem must be 1 or 2");

  ExperimentConfig pilot = config;
  pilot.n_grid = {pilot_n};
  pilot.fit_rates = false;
  pilot.want_linear = true;
  pilot.want_integral = theorem == 2 || config.want_integral;
  pilot.validate();
  const ExperimentReport run = run_experiment(pilot);

  const std::uint64_t k = pilot.schedule.k(pilot_n);
  const GridPointTerms terms = precompute_grid_point(pilot.model, pilot.functional, pilot_n, k,
                                                     pilot.bounds, pilot.psi_grid_points);
  const double pq = terms.p * (1.0 - terms.p);
  const double lg = std::log(static_cast<double>(
      config.log_mode == LogMode::LogR ? terms.r : pilot_n));
  const double ratio = lg / static_cast<double>(pilot_n);
  const double e1 = theorem == 1 ? 0.25 : 0.75;
  const double e2 = theorem == 1 ? 0.75 : 1.25;
  const double unit1 = std::pow(pq, e1) * std::pow(ratio, e2) * std::abs(terms.gf_at_xi);
  const double psi_here = config.log_mode == LogMode::LogR ? terms.psi_log_r : terms.psi_log_n;
  const double unit2 = theorem == 1 ? std::sqrt(pq) * std::sqrt(ratio) * psi_here
                                    : pq * ratio * psi_here;

  CalibrationResult result;
  result.params = config.bounds;

  std::vector<double> normalized;
  normalized.reserve(run.samples.size());
  bool all_zero = true;
  for (const auto& s : run.samples) {
    const double mag = std::abs(theorem == 1 ? s.r1 : s.r2);
    if (mag != 0.0) all_zero = false;
    normalized.push_back(mag / unit1);
  }
  if (all_zero) {
    result.params.A = 1.0;
    result.params.B = 1.0;
    result.degenerate = true;
    result.b_defaulted = true;
    return result;
  }
  std::sort(normalized.begin(), normalized.end());
  result.params.A = sorted_quantile(normalized, quantile_level);

  if (unit2 > 0.0) {
    std::vector<double> residual;
    residual.reserve(run.samples.size());
    for (const auto& s : run.samples) {
      const double mag = std::abs(theorem == 1 ? s.r1 : s.r2);
      residual.push_back(std::max(0.0, mag - result.params.A * unit1) / unit2);
    }
    std::sort(residual.begin(), residual.end());
    const double b = sorted_quantile(residual, quantile_level);
    if (b > 0.0) {
      result.params.B = b;
    } else {
      result.b_defaulted = true;
    }
  } else {
    result.b_defaulted = true;  // psi = 0: the second addend carries no signal
  }
  return result;
}

LemmaAResult lemma_a_experiment(std::size_t n, double alpha, std::size_t k, std::size_t draws,
                                std::uint64_t seed, std::size_t max_tries) {
  if (k > n) throw domain_error("lemma_a_experiment: k > n");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw domain_error("lemma_a_experiment: alpha must be in (0,1)");
  }
  LemmaAResult result;
  result.critical = ks_two_sample_critical(draws, draws, 0.01);
  if (draws < 1000) {
    result.inconclusive = true;
    result.note = "draws below the floor of 1000; statistics would be meaningless";
    return result;
  }
  const double mass = binomial_pmf(n, alpha, k);
  if (mass < 1e-4) {
    throw domain_error("lemma_a_experiment: binomial mass at k is " + std::to_string(mass) +
                       " (< 1e-4); rejection sampling infeasible");
  }
  if (k == 0) {
    result.pass = true;
    result.note = "k = 0: both conditional laws are empty";
    return result;
  }

  std::vector<std::vector<double>> direct(k, std::vector<double>(draws));
  std::vector<std::vector<double>> rejected(k, std::vector<double>(draws));
  for (std::size_t d = 0; d < draws; ++d) {
    const auto a = conditional_uniform_order_stats(n, alpha, k, SeedPath{seed, 1, n, d});
    const auto b = rejection_conditional_sampler(n, alpha, k, SeedPath{seed, 2, n, d}, max_tries);
    for (std::size_t i = 0; i < k; ++i) {
      direct[i][d] = a[i];
      rejected[i][d] = b[i];
    }
  }
  result.pass = true;
  result.ks_by_marginal.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    result.ks_by_marginal[i] = ks_two_sample(direct[i], rejected[i]);
    if (result.ks_by_marginal[i] >= result.critical) result.pass = false;
  }
  return result;
}

}  // namespace bkq
