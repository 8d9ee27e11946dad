// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier Monte Carlo criteria run multi-threaded but are
// byte-reproducible; every tolerance is fixed here, not calibrated later.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "bkq/conditions.hpp"
#include "bkq/experiment.hpp"
#include "bkq/json_io.hpp"
#include "bkq/rng.hpp"
#include "bkq/sampling.hpp"

namespace fs = std::filesystem;
using namespace bkq;

namespace {

int g_failures = 0;
std::string g_filter;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d — %s (%s)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool enabled(int id) {
  return g_filter.empty() || g_filter == std::to_string(id);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* spec, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), spec, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Linear-representation identity on random small samples.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(20240901);
  const std::vector<DistributionModel> models = {DistributionModel::uniform01(),
                                                 DistributionModel::gumbel()};
  const std::vector<SmoothFunctional> funcs = {SmoothFunctional::identity(),
                                               SmoothFunctional::power_int(0)};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& model = models[trial % 2];
    const auto& G = funcs[(trial / 2) % 2];
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 49);
    Sample s;
    s.values.resize(n);
    for (double& x : s.values) x = model.quantile(rng.next_unit());
    const std::uint64_t k = 1 + rng.next_u64() % (n - 1);
    const double p = static_cast<double>(k) / static_cast<double>(n);

    const double xi = model.quantile(p);
    std::vector<double> sorted(s.values);
    std::sort(sorted.begin(), sorted.end());
    double count = 0.0;
    for (const double x : s.values) count += (x <= xi) ? 1.0 : 0.0;
    const double expected = (G.value(sorted[k - 1]) - G.value(xi)) +
                            (count - static_cast<double>(k)) / n * G.deriv(xi) /
                                model.density(xi);
    worst = std::max(worst, std::abs(linear_remainder(s, model, G, k) - expected));
  }
  const double secs = seconds_since(t0);
  report(1, "linear-representation identity", worst <= 1e-12 && secs < 1.0,
         fmt("max |diff| = %.3g over 1000 samples, %.2fs", worst, secs));
}

// ---------------------------------------------------------------------------
// 2. Between-sum oracle, hand pins, and the integral-representation identity.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto uniform = DistributionModel::uniform01();
  const auto id = SmoothFunctional::identity();
  bool pass = true;
  std::string detail;

  Sample pin;
  pin.values = {0.7, 0.8, 0.9};
  const double bs = between_sum(pin, uniform, id, 2);
  const double r2 = integral_remainder(pin, uniform, id, 2);
  if (std::abs(bs - (-1.0 / 18.0)) > 1e-14 || std::abs(r2 - 1.0 / 6.0) > 1e-14) {
    pass = false;
    detail = fmt("hand pins off: between=%.17g, remainder=%.17g", bs, r2);
  }

  CounterRng rng(777);
  const std::vector<DistributionModel> models = {DistributionModel::uniform01(),
                                                 DistributionModel::gumbel()};
  const std::vector<SmoothFunctional> funcs = {SmoothFunctional::identity(),
                                               SmoothFunctional::power_int(0),
                                               SmoothFunctional::power_int(2)};
  std::size_t oracle_mismatches = 0;
  double worst_identity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& model = models[trial % 2];
    const auto& G = funcs[trial % 3];
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 49);
    Sample s;
    s.values.resize(n);
    for (double& x : s.values) x = model.quantile(rng.next_unit());
    const std::uint64_t k = 1 + rng.next_u64() % (n - 1);
    const double p = static_cast<double>(k) / static_cast<double>(n);

    // raw-value Stieltjes oracle
    const double xi = model.quantile(p);
    std::vector<double> sorted(s.values);
    std::sort(sorted.begin(), sorted.end());
    const double xi_hat = sorted[k - 1];
    std::uint64_t big_n = 0;
    for (const double x : s.values) big_n += (x <= xi) ? 1 : 0;
    double oracle = 0.0;
    if (big_n != k) {
      long double acc = 0.0L;
      for (const double x : s.values) {
        const bool in_range = big_n > k ? (x > xi_hat && x <= xi) : (x > xi && x <= xi_hat);
        if (in_range) acc += static_cast<long double>(G.value(x) - G.value(xi));
      }
      oracle = static_cast<double>((big_n > k ? 1.0L : -1.0L) * acc) / static_cast<double>(n);
    }
    const double lhs = between_sum(s, model, G, k);
    if (lhs != oracle) ++oracle_mismatches;

    const double gf = G.deriv(xi) / model.density_at_quantile(p);
    const double diff = (static_cast<double>(big_n) - static_cast<double>(k)) /
                        static_cast<double>(n);
    worst_identity = std::max(
        worst_identity,
        std::abs(lhs - (-0.5 * diff * diff * gf + integral_remainder(s, model, G, k))));
  }
  if (oracle_mismatches > 0 || worst_identity > 1e-12) pass = false;
  const double secs = seconds_since(t0);
  if (detail.empty()) {
    detail = fmt("oracle mismatches = %.0f, max identity residual = %.3g, %.2fs",
                 static_cast<double>(oracle_mismatches), worst_identity, secs);
  }
  report(2, "between-sum oracle and identity", pass && secs < 1.0, detail);
}

// ---------------------------------------------------------------------------
// 3. Central-quantile rate slopes on the uniform median.
void criterion_3() {
  ExperimentConfig cfg;
  cfg.model = DistributionModel::uniform01();
  cfg.functional = SmoothFunctional::identity();
  cfg.schedule = QuantileSchedule::fixed_fraction(0.5);
  for (int e = 10; e <= 17; ++e) cfg.n_grid.push_back(1ull << e);
  cfg.replications = 1000;
  cfg.seed = 42;
  const auto rep = run_experiment(cfg);
  const double s1 = rep.fit_abs_r1_median->slope;
  const double s2 = rep.fit_abs_r2_median->slope;
  const bool pass = s1 >= -0.85 && s1 <= -0.65 && s2 >= -1.35 && s2 <= -1.15;
  report(3, "central-quantile rate slopes", pass,
         fmt("slope|R1| = %.4f (band [-0.85,-0.65]), slope|R2| = %.4f (band [-1.35,-1.15])", s1,
             s2));
}

// ---------------------------------------------------------------------------
// 4. Intermediate-quantile stochastic boundedness on the Gumbel left tail.
void criterion_4() {
  ExperimentConfig cfg;
  cfg.model = DistributionModel::gumbel();
  cfg.functional = SmoothFunctional::power_int(0);
  cfg.schedule = QuantileSchedule::power(0.7, ScheduleSide::Left);
  cfg.n_grid = {10000, 100000, 1000000, 10000000};
  cfg.replications = 500;
  cfg.seed = 42;
  cfg.want_integral = false;  // only |R1| enters this criterion
  cfg.fit_rates = false;
  const auto rep = run_experiment(cfg);

  // normalized statistic per replication: |R1| / [p^{1/4} (log r/n)^{3/4} (|g|/f)(xi)]
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<std::vector<double>> normalized(cfg.n_grid.size());
  const RatioFunction ratio(cfg.model, cfg.functional);
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
    const auto n = cfg.n_grid[gi];
    const auto k = cfg.schedule.k(n);
    const auto r = std::min(k, n - k);
    const double p = static_cast<double>(k) / static_cast<double>(n);
    const double unit = std::pow(p, 0.25) *
                        std::pow(std::log(static_cast<double>(r)) / static_cast<double>(n), 0.75) *
                        std::abs(ratio.v(p));
    auto& bucket = normalized[gi];
    bucket.reserve(reps);
    for (std::size_t i = gi * reps; i < (gi + 1) * reps; ++i) {
      bucket.push_back(std::abs(rep.samples[i].r1) / unit);
    }
  }

  // non-increase of the 0.99 quantile within binomial bands: the fraction of
  // the next grid point's values above the previous empirical 0.99 quantile
  // must stay within 0.01 + 3 sigma.
  const double band = 0.01 + 3.0 * std::sqrt(0.01 * 0.99 / static_cast<double>(reps));
  bool pass = true;
  std::vector<double> q99(cfg.n_grid.size());
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
    auto sorted = normalized[gi];
    std::sort(sorted.begin(), sorted.end());
    q99[gi] = sorted_quantile(sorted, 0.99);
  }
  for (std::size_t gi = 1; gi < cfg.n_grid.size(); ++gi) {
    std::size_t above = 0;
    for (const double t : normalized[gi]) above += (t > q99[gi - 1]) ? 1 : 0;
    const double frac = static_cast<double>(above) / static_cast<double>(reps);
    if (frac > band) pass = false;
  }
  std::string qs;
  for (std::size_t gi = 0; gi < q99.size(); ++gi) qs += fmt("%.3f ", q99[gi]);
  report(4, "intermediate-quantile normalized q99 non-increasing", pass,
         "q99 sequence: " + qs + fmt("band %.4f", band));
}

// ---------------------------------------------------------------------------
// 5. Exceedance decay with calibrated constants.
void criterion_5() {
  ExperimentConfig cfg;
  cfg.model = DistributionModel::uniform01();
  cfg.functional = SmoothFunctional::identity();
  cfg.schedule = QuantileSchedule::fixed_fraction(0.5);
  cfg.replications = 1000;
  cfg.seed = 42;
  cfg.fit_rates = false;
  const auto cal = calibrate_constants(cfg, 1024, 0.99, 1);
  cfg.bounds = cal.params;
  for (int e = 10; e <= 14; ++e) cfg.n_grid.push_back(1ull << e);
  const auto rep = run_experiment(cfg);
  const double sigma = std::sqrt(0.01 * 0.99 / static_cast<double>(cfg.replications));
  bool pass = true;
  std::string fracs;
  for (std::size_t i = 0; i < rep.per_n.size(); ++i) {
    fracs += fmt("%.4f ", rep.per_n[i].exceed_delta1);
    if (i > 0 && rep.per_n[i].exceed_delta1 > rep.per_n[i - 1].exceed_delta1 + 3.0 * sigma) {
      pass = false;
    }
  }
  report(5, "calibrated exceedance fractions non-increasing", pass,
         "P(|R1|>Delta): " + fracs + fmt("(3-sigma band %.4f, A = %.3f)", 3.0 * sigma,
                                         cal.params.A));
}

// ---------------------------------------------------------------------------
// 6. Conditional order-statistics samplers agree (two-sample KS, all marginals).
void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  double worst = 0.0;
  struct Config {
    std::size_t n;
    double alpha;
    std::size_t k;
  };
  for (const auto& c : {Config{20, 0.3, 6}, Config{50, 0.5, 25}, Config{30, 0.8, 24}}) {
    const auto res = lemma_a_experiment(c.n, c.alpha, c.k, 10000, 42);
    if (!res.pass) pass = false;
    for (const double ks : res.ks_by_marginal) worst = std::max(worst, ks);
  }
  const double secs = seconds_since(t0);
  report(6, "conditional sampler equality in law", pass && secs < 30.0,
         fmt("max KS = %.5f vs critical %.5f, %.1fs", worst, 1.63 * std::sqrt(2.0 / 1e4), secs));
}

// ---------------------------------------------------------------------------
// 7. Worked-example limits via the examples subcommand.
void criterion_7(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "bkq_acceptance_examples";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cmd = cli + " examples --out " + dir.string() + " > /dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    report(7, "worked-example limits", false, "examples subcommand failed");
    return;
  }
  bool pass = true;
  std::string detail;
  try {
    const auto j = json::parse(read_text_file((dir / "examples.json").string()));
    const double t2 = j["example1"]["second_term_at_boundary"].get<double>();
    if (std::abs(t2 - (-1.0)) >= 0.05) {
      pass = false;
      detail += fmt("ex1 second term %.4f; ", t2);
    }
    for (const auto& pair : j["example2"]["pairs_u_to_0"]) {
      const double c = pair["constant"].get<double>();
      const double t1 = pair["term1_at_boundary"].get<double>();
      if (std::abs(t1 - c) >= 0.05) {
        pass = false;
        detail += fmt("ex2 term1 %.4f vs %.4f; ", t1, c);
      }
    }
    for (const auto& pair : j["example3"]["pairs_u_to_1"]) {
      const double c = pair["constant"].get<double>();
      const double t1 = pair["term1_at_boundary"].get<double>();
      if (std::abs(t1 - c) >= 0.05) {
        pass = false;
        detail += fmt("ex3 term1 %.4f vs %.4f; ", t1, c);
      }
    }
    if (j["example5"]["slope_bounded_right"]["verdict"] != "Fails") {
      pass = false;
      detail += "ex5 slope verdict not Fails; ";
    }
    if (j["example5"]["final_criterion"]["r_n_pow_0_8"]["verdict"] != "Holds" ||
        j["example5"]["final_criterion"]["r_n_pow_0_6"]["verdict"] != "Fails") {
      pass = false;
      detail += "ex5 final criterion verdicts wrong; ";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("parse failure: ") + e.what();
  }
  if (detail.empty()) detail = "limits within 0.05 at grid boundary; verdicts as asserted";
  report(7, "worked-example limits", pass, detail);
}

// ---------------------------------------------------------------------------
// 8. Closed-form two-term displays vs the generic scaled slope.
void criterion_8() {
  double worst = 0.0;
  const auto scan = [&worst](const RatioFunction& ratio,
                             const std::function<double(double)>& closed_total,
                             const std::vector<double>& grid) {
    for (const double u : grid) {
      const double closed = closed_total(u);
      const double generic = scaled_v_slope(ratio, u);
      worst = std::max(worst, std::abs(closed - generic) / std::max(1e-12, std::abs(closed)));
    }
  };
  std::vector<double> left, right;
  for (double u = 1e-6; u <= 1.01e-2; u *= std::sqrt(10.0)) {
    left.push_back(u);
    right.push_back(1.0 - u);
  }
  for (const int k : {0, 1, 2}) {
    const RatioFunction ratio(DistributionModel::gumbel(), SmoothFunctional::power_int(k));
    scan(ratio, [k](double u) { return gumbel_slope_terms(u, k).total(); }, left);
    scan(ratio, [k](double u) { return gumbel_slope_terms(u, k).total(); }, right);
  }
  for (const auto& [rho, gamma] :
       std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 1.0}, {3.0, 2.0}}) {
    const RatioFunction ratio(DistributionModel::exp_power_tail(gamma),
                              SmoothFunctional::power_abs(rho, 1));
    scan(ratio, [=](double u) { return exp_power_slope_terms(u, rho, gamma).total(); }, left);
    scan(ratio, [=](double u) { return exp_power_slope_terms(u, rho, gamma).total(); }, right);
  }
  for (const double C : {1.0, 0.5}) {
    for (const int rho : {0, 1}) {
      const RatioFunction ratio(DistributionModel::super_heavy_log(C),
                                SmoothFunctional::power_int(rho));
      scan(ratio, [=](double u) { return heavy_log_slope_closed(u, rho, C); },
           {0.9, 0.99, 0.999});
    }
  }
  report(8, "closed-form vs generic slope agreement", worst <= 1e-8,
         fmt("max relative difference = %.3g (tolerance 1e-8)", worst));
}

// ---------------------------------------------------------------------------
// 9. Byte-identical reports across thread counts.
void criterion_9(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "bkq_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const char* config = R"({
    "model": {"family": "gumbel"},
    "G": {"form": "power_int", "k": 0},
    "schedule": {"rule": "power", "beta": 0.7, "side": "left"},
    "n_grid": [4096, 8192, 16384, 32768],
    "replications": 200,
    "seed": 1234,
    "log_mode": "r"
  })";
  write_text_file((dir / "cfg.json").string(), config);
  const std::string base = cli + " simulate --config " + (dir / "cfg.json").string();
  const int rc1 =
      std::system((base + " --out " + (dir / "t1").string() + " --threads 1 > /dev/null 2>&1")
                      .c_str());
  const int rc2 =
      std::system((base + " --out " + (dir / "t4").string() + " --threads 4 > /dev/null 2>&1")
                      .c_str());
  bool pass = rc1 == 0 && rc2 == 0;
  std::string detail = "exit codes ok";
  if (pass) {
    const auto a = read_text_file((dir / "t1" / "report.json").string());
    const auto b = read_text_file((dir / "t4" / "report.json").string());
    const auto ca = read_text_file((dir / "t1" / "samples.csv").string());
    const auto cb = read_text_file((dir / "t4" / "samples.csv").string());
    pass = a == b && ca == cb;
    detail = pass ? fmt("report.json (%.0f bytes) and samples.csv byte-identical",
                        static_cast<double>(a.size()))
                  : "outputs differ across thread counts";
  } else {
    detail = "simulate invocation failed";
  }
  report(9, "byte-identical reports across thread counts", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = BKQ_CLI_PATH;
  if (argc > 1) g_filter = argv[1];

  if (enabled(1)) criterion_1();
  if (enabled(2)) criterion_2();
  if (enabled(3)) criterion_3();
  if (enabled(4)) criterion_4();
  if (enabled(5)) criterion_5();
  if (enabled(6)) criterion_6();
  if (enabled(7)) criterion_7(cli);
  if (enabled(8)) criterion_8();
  if (enabled(9)) criterion_9(cli);

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
  return g_failures == 0 ? 0 : 1;
}
