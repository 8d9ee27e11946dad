// Command-line front end: seeded Monte Carlo experiments on Bahadur-Kiefer
// type remainders for intermediate sample quantiles, regularity-condition
// checks, worked-example reproductions and the conditional order-statistics
// test. All outputs are machine-first (JSON/CSV); plotting is left to
// external tools.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bkq/conditions.hpp"
#include "bkq/errors.hpp"
#include "bkq/experiment.hpp"
#include "bkq/json_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitRetryBudget = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::optional<std::string> log_mode;
};

void apply_overrides(bkq::ExperimentConfig& cfg, const CommonFlags& flags) {
  if (flags.seed) cfg.seed = *flags.seed;
  cfg.threads = flags.threads;
  if (flags.log_mode) {
    cfg.log_mode = bkq::log_mode_from_string(*flags.log_mode);
    cfg.bounds.log_mode = cfg.log_mode;
  }
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw bkq::config_error("output directory not writable: " + dir);
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int run_simulate(const CommonFlags& flags) {
  auto cfg = bkq::load_config_file(flags.config_path);
  apply_overrides(cfg, flags);
  cfg.validate();
  ensure_out_dir(flags.out_dir);
  const auto report = bkq::run_experiment(cfg);
  bkq::write_text_file(join(flags.out_dir, "report.json"),
                       bkq::report_to_json(report, cfg).dump(2) + "\n");
  bkq::write_text_file(join(flags.out_dir, "samples.csv"),
                       bkq::samples_to_csv(report.samples));
  std::fprintf(stderr, "simulate: %zu rows in %.2fs -> %s\n", report.samples.size(),
               report.wall_seconds, flags.out_dir.c_str());
  if (report.fit_abs_r1_median) {
    std::fprintf(stderr, "  median |R1| log-log slope: %+.4f (stderr %.4f, R^2 %.4f)\n",
                 report.fit_abs_r1_median->slope, report.fit_abs_r1_median->slope_stderr,
                 report.fit_abs_r1_median->r_squared);
  }
  if (report.fit_abs_r2_median) {
    std::fprintf(stderr, "  median |R2| log-log slope: %+.4f (stderr %.4f, R^2 %.4f)\n",
                 report.fit_abs_r2_median->slope, report.fit_abs_r2_median->slope_stderr,
                 report.fit_abs_r2_median->r_squared);
  }
  return kExitOk;
}

// Re-fits log-log decay rates from a previously written samples.csv.
int run_rate(const std::string& samples_path) {
  std::istringstream csv(bkq::read_text_file(samples_path));
  std::map<std::uint64_t, std::vector<double>> r1_by_n, r2_by_n;
  std::string line;
  if (!std::getline(csv, line)) throw bkq::config_error("samples csv: missing header");
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cols.push_back(cell);
    if (cols.size() < 8) throw bkq::config_error("samples csv: malformed row: " + line);
    const auto n = static_cast<std::uint64_t>(std::stoull(cols[0]));
    r1_by_n[n].push_back(std::abs(std::stod(cols[6])));
    r2_by_n[n].push_back(std::abs(std::stod(cols[7])));
  }
  if (r1_by_n.size() < 3) throw bkq::config_error("rate: needs >= 3 distinct n values");
  auto medians = [](std::map<std::uint64_t, std::vector<double>>& by_n) {
    std::vector<std::pair<double, double>> pts;
    for (auto& [n, v] : by_n) {
      std::sort(v.begin(), v.end());
      pts.emplace_back(static_cast<double>(n), bkq::sorted_quantile(v, 0.5));
    }
    return pts;
  };
  auto fittable = [](const std::vector<std::pair<double, double>>& pts) {
    for (const auto& [n, m] : pts) {
      if (!(m > 0.0) || !std::isfinite(m)) return false;
    }
    return true;
  };
  bkq::json out;
  const auto pts1 = medians(r1_by_n);
  const auto pts2 = medians(r2_by_n);
  if (fittable(pts1)) out["abs_r1_median"] = bkq::rate_fit_to_json(bkq::fit_rate(pts1));
  if (fittable(pts2)) out["abs_r2_median"] = bkq::rate_fit_to_json(bkq::fit_rate(pts2));
  if (out.empty()) throw bkq::config_error("rate: no column with positive finite medians");
  std::printf("%s\n", out.dump(2).c_str());
  return kExitOk;
}

int run_conditions(const CommonFlags& flags) {
  auto cfg = bkq::load_config_file(flags.config_path);
  apply_overrides(cfg, flags);
  ensure_out_dir(flags.out_dir);
  bkq::json reports = bkq::json::array();
  reports.push_back(
      bkq::condition_report_to_json(bkq::check_log_over_depth(cfg.schedule, cfg.n_grid)));
  for (const auto mode : {bkq::LogMode::LogR, bkq::LogMode::LogN}) {
    reports.push_back(bkq::condition_report_to_json(
        bkq::check_psi_absorption(cfg.model, cfg.functional, cfg.schedule, cfg.n_grid,
                                  cfg.bounds.C, mode, cfg.psi_grid_points)));
  }
  {
    // Scaled-slope boundedness along the schedule's own levels.
    const bkq::RatioFunction ratio(cfg.model, cfg.functional);
    std::vector<double> u_grid;
    for (const auto n : cfg.n_grid) u_grid.push_back(cfg.schedule.fraction(n));
    reports.push_back(bkq::condition_report_to_json(bkq::check_slope_bounded(ratio, u_grid)));
  }
  reports.push_back(
      bkq::condition_report_to_json(bkq::check_heavy_tail_schedule(cfg.schedule, cfg.n_grid)));
  bkq::json out;
  out["config"] = bkq::config_to_json(cfg);
  out["reports"] = std::move(reports);
  bkq::write_text_file(join(flags.out_dir, "conditions.json"), out.dump(2) + "\n");
  std::fprintf(stderr, "conditions: %zu reports -> %s\n", out["reports"].size(),
               flags.out_dir.c_str());
  return kExitOk;
}

int run_examples(const std::string& out_dir) {
  ensure_out_dir(out_dir);
  bkq::write_text_file(join(out_dir, "examples.json"),
                       bkq::worked_examples_report().dump(2) + "\n");
  std::fprintf(stderr, "examples -> %s/examples.json\n", out_dir.c_str());
  return kExitOk;
}

int run_lemma_a(std::uint64_t n, double alpha, std::uint64_t k, std::uint64_t draws,
                std::uint64_t seed, std::uint64_t max_tries) {
  const auto result = bkq::lemma_a_experiment(static_cast<std::size_t>(n), alpha,
                                              static_cast<std::size_t>(k),
                                              static_cast<std::size_t>(draws), seed,
                                              static_cast<std::size_t>(max_tries));
  if (result.inconclusive) {
    std::fprintf(stderr, "lemma-a: inconclusive: %s\n", result.note.c_str());
    return kExitConfig;
  }
  std::printf("marginal,ks,critical\n");
  for (std::size_t i = 0; i < result.ks_by_marginal.size(); ++i) {
    std::printf("%zu,%.6f,%.6f\n", i + 1, result.ks_by_marginal[i], result.critical);
  }
  std::printf("pass,%s\n", result.pass ? "true" : "false");
  return result.pass ? kExitOk : kExitRuntime;
}

int run_calibrate(const CommonFlags& flags, std::uint64_t pilot_n, double level, int theorem) {
  auto cfg = bkq::load_config_file(flags.config_path);
  apply_overrides(cfg, flags);
  const auto result = bkq::calibrate_constants(cfg, pilot_n, level, theorem);
  bkq::json out;
  out["A"] = result.params.A;
  out["B"] = result.params.B;
  out["C"] = result.params.C;
  out["c"] = result.params.c;
  out["log_mode"] = bkq::log_mode_name(result.params.log_mode);
  out["degenerate_pilot"] = result.degenerate;
  out["b_kept_default"] = result.b_defaulted;
  std::printf("%s\n", out.dump(2).c_str());
  if (result.degenerate) {
    std::fprintf(stderr, "calibrate: warning: degenerate pilot (all remainders zero)\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bahadur-Kiefer remainders for intermediate sample quantiles"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string samples_path;
  std::uint64_t la_n = 20, la_k = 6, la_draws = 10000, la_seed = 42, la_tries = 100000;
  double la_alpha = 0.3;
  std::uint64_t cal_pilot = 1024;
  double cal_level = 0.99;
  int cal_theorem = 1;
  std::string examples_out = ".";

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", flags.config_path, "experiment config JSON")->required();
    }
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "override the master seed (64-bit unsigned)");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_option("--log-mode", flags.log_mode, "log factor: r (log r_n) or n (log n)")
        ->check(CLI::IsMember({"r", "n"}));
  };

  auto* simulate = app.add_subcommand("simulate", "run a seeded remainder experiment");
  add_common(simulate, true);

  auto* rate = app.add_subcommand("rate", "fit log-log decay rates from samples.csv");
  rate->add_option("--samples", samples_path, "samples.csv from a simulate run")->required();

  auto* conditions = app.add_subcommand("conditions", "check regularity conditions for a config");
  add_common(conditions, true);

  auto* examples = app.add_subcommand("examples", "reproduce the worked example families");
  examples->add_option("--out", examples_out, "output directory");

  auto* lemma = app.add_subcommand("lemma-a", "conditional order-statistics two-sampler test");
  lemma->add_option("--n", la_n, "sample size");
  lemma->add_option("--alpha", la_alpha, "threshold level in (0,1)");
  lemma->add_option("--k", la_k, "conditioned count");
  lemma->add_option("--draws", la_draws, "replications per sampler (>= 1000)");
  lemma->add_option("--seed", la_seed, "master seed");
  lemma->add_option("--max-tries", la_tries, "rejection retry budget per draw");

  auto* calibrate = app.add_subcommand("calibrate", "fit bound constants from a pilot run");
  add_common(calibrate, true);
  calibrate->add_option("--pilot-n", cal_pilot, "pilot sample size");
  calibrate->add_option("--level", cal_level, "calibration quantile level in (0.9,1)");
  calibrate->add_option("--theorem", cal_theorem, "target representation (1 or 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(flags);
    if (rate->parsed()) return run_rate(samples_path);
    if (conditions->parsed()) return run_conditions(flags);
    if (examples->parsed()) return run_examples(examples_out);
    if (lemma->parsed()) return run_lemma_a(la_n, la_alpha, la_k, la_draws, la_seed, la_tries);
    if (calibrate->parsed()) return run_calibrate(flags, cal_pilot, cal_level, cal_theorem);
  } catch (const bkq::retry_budget_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRetryBudget;
  } catch (const bkq::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const bkq::schedule_error& e) {
    std::fprintf(stderr, "schedule error: %s\n", e.what());
    return kExitConfig;
  } catch (const bkq::domain_error& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitConfig;
  } catch (const bkq::error& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}
