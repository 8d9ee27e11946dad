#include "bkq/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bkq/errors.hpp"

namespace bkq {

namespace {

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw config_error(std::string("descriptor: missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw config_error(std::string("descriptor: missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

DistributionModel model_from_json(const json& j) {
  const std::string family = require_string(j, "family");
  if (family == "uniform01") return DistributionModel::uniform01();
  if (family == "gumbel") return DistributionModel::gumbel();
  if (family == "exp_power_tail") {
    return DistributionModel::exp_power_tail(require_number(j, "gamma"));
  }
  if (family == "weibull_frechet") {
    return DistributionModel::weibull_frechet(require_number(j, "gamma"));
  }
  if (family == "symmetric_exp_power") {
    return DistributionModel::symmetric_exp_power(require_number(j, "gamma"));
  }
  if (family == "super_heavy_log") {
    std::optional<double> x0;
    if (j.contains("x0")) x0 = j["x0"].get<double>();
    return DistributionModel::super_heavy_log(require_number(j, "C"), x0);
  }
  if (family == "pareto_left") {
    return DistributionModel::pareto_left(require_number(j, "gamma"));
  }
  throw config_error("descriptor: unknown family '" + family + "'");
}

json model_to_json(const DistributionModel& model) {
  json j;
  switch (model.family()) {
    case Family::Uniform01:
    case Family::Gumbel:
      j["family"] = family_name(model.family());
      break;
    case Family::ExpPowerTail:
    case Family::WeibullFrechet:
    case Family::SymmetricExpPower:
      j["family"] = family_name(model.family());
      j["gamma"] = model.param_gamma();
      break;
    case Family::SuperHeavyLog:
      j["family"] = "super_heavy_log";
      j["C"] = model.param_C();
      j["x0"] = model.param_x0();
      break;
    case Family::Custom:
      if (model.label() == "pareto_left") {
        j["family"] = "pareto_left";
        j["gamma"] = model.param_gamma();
        break;
      }
      throw unsupported_error("model_to_json: custom closures are not serializable");
  }
  return j;
}

SmoothFunctional functional_from_json(const json& j) {
  const std::string form = require_string(j, "form");
  if (form == "identity") return SmoothFunctional::identity();
  if (form == "power_int") {
    const double k = require_number(j, "k");
    if (k != std::floor(k)) throw config_error("power_int: k must be an integer");
    return SmoothFunctional::power_int(static_cast<int>(k));
  }
  if (form == "power_abs") {
    const int sign = j.contains("sign") ? j["sign"].get<int>() : 1;
    return SmoothFunctional::power_abs(require_number(j, "rho"), sign);
  }
  throw config_error("descriptor: unknown functional form '" + form + "'");
}

json functional_to_json(const SmoothFunctional& f) {
  json j;
  switch (f.form()) {
    case GForm::Identity:
      j["form"] = "identity";
      break;
    case GForm::PowerInt:
      j["form"] = "power_int";
      j["k"] = f.param_k();
      break;
    case GForm::PowerAbs:
      j["form"] = "power_abs";
      j["rho"] = f.param_rho();
      j["sign"] = f.param_sign();
      break;
    case GForm::Custom:
      throw unsupported_error("functional_to_json: custom closures are not serializable");
  }
  return j;
}

namespace {

ScheduleSide side_from_string(const std::string& s) {
  if (s == "left") return ScheduleSide::Left;
  if (s == "right") return ScheduleSide::Right;
  throw config_error("descriptor: schedule side must be 'left' or 'right'");
}

}  // namespace

QuantileSchedule schedule_from_json(const json& j) {
  const std::string rule = require_string(j, "rule");
  if (rule == "fixed_fraction") {
    return QuantileSchedule::fixed_fraction(require_number(j, "alpha"));
  }
  if (rule == "power") {
    return QuantileSchedule::power(require_number(j, "beta"),
                                   side_from_string(require_string(j, "side")));
  }
  if (rule == "log_power") {
    return QuantileSchedule::log_power(require_number(j, "q"),
                                       side_from_string(require_string(j, "side")));
  }
  if (rule == "explicit") {
    if (!j.contains("table") || !j["table"].is_array()) {
      throw config_error("descriptor: explicit schedule needs a 'table' array");
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> nk;
    for (const auto& row : j["table"]) {
      if (!row.is_array() || row.size() != 2) {
        throw config_error("descriptor: explicit table rows must be [n, k]");
      }
      nk.emplace_back(row[0].get<std::uint64_t>(), row[1].get<std::uint64_t>());
    }
    return QuantileSchedule::explicit_table(std::move(nk));
  }
  throw config_error("descriptor: unknown schedule rule '" + rule + "'");
}

json schedule_to_json(const QuantileSchedule& schedule) {
  json j;
  switch (schedule.rule()) {
    case ScheduleRule::FixedFraction:
      j["rule"] = "fixed_fraction";
      j["alpha"] = schedule.param_alpha();
      break;
    case ScheduleRule::Power:
      j["rule"] = "power";
      j["beta"] = schedule.param_beta();
      j["side"] = schedule.side() == ScheduleSide::Left ? "left" : "right";
      break;
    case ScheduleRule::LogPower:
      j["rule"] = "log_power";
      j["q"] = schedule.param_q();
      j["side"] = schedule.side() == ScheduleSide::Left ? "left" : "right";
      break;
    case ScheduleRule::Explicit: {
      j["rule"] = "explicit";
      json table = json::array();
      for (const auto& [n, k] : schedule.table()) table.push_back({n, k});
      j["table"] = std::move(table);
      break;
    }
  }
  return j;
}

LogMode log_mode_from_string(const std::string& s) {
  if (s == "r" || s == "log_r") return LogMode::LogR;
  if (s == "n" || s == "log_n") return LogMode::LogN;
  throw config_error("log_mode must be 'r' or 'n'");
}

std::string log_mode_name(LogMode mode) { return mode == LogMode::LogR ? "r" : "n"; }

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  // The functional may sit beside the model or be nested inside it, as in
  // {"family": "gumbel", "G": {"form": "power_int", "k": 0}}.
  const bool nested_g = j.contains("model") && j["model"].contains("G");
  if (!j.contains("model") || !j.contains("schedule") || !(j.contains("G") || nested_g)) {
    throw config_error("config: needs 'model', 'G' and 'schedule' descriptors");
  }
  cfg.model = model_from_json(j["model"]);
  cfg.functional = functional_from_json(j.contains("G") ? j["G"] : j["model"]["G"]);
  cfg.schedule = schedule_from_json(j["schedule"]);
  if (!j.contains("n_grid") || !j["n_grid"].is_array()) {
    throw config_error("config: needs an 'n_grid' array");
  }
  for (const auto& n : j["n_grid"]) cfg.n_grid.push_back(n.get<std::uint64_t>());
  cfg.replications = static_cast<std::uint64_t>(require_number(j, "replications"));
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("experiment_id")) cfg.experiment_id = j["experiment_id"].get<std::uint64_t>();
  if (j.contains("bound_params")) {
    const auto& b = j["bound_params"];
    if (b.contains("A")) cfg.bounds.A = b["A"].get<double>();
    if (b.contains("B")) cfg.bounds.B = b["B"].get<double>();
    if (b.contains("C")) cfg.bounds.C = b["C"].get<double>();
    if (b.contains("c")) cfg.bounds.c = b["c"].get<double>();
  }
  if (j.contains("log_mode")) {
    cfg.log_mode = log_mode_from_string(j["log_mode"].get<std::string>());
  }
  cfg.bounds.log_mode = cfg.log_mode;
  if (j.contains("theorems")) {
    cfg.want_linear = false;
    cfg.want_integral = false;
    for (const auto& t : j["theorems"]) {
      const int v = t.get<int>();
      if (v == 1) cfg.want_linear = true;
      else if (v == 2) cfg.want_integral = true;
      else throw config_error("config: theorems entries must be 1 or 2");
    }
  }
  if (j.contains("psi_grid_points")) {
    cfg.psi_grid_points = j["psi_grid_points"].get<std::size_t>();
  }
  if (j.contains("fit_rates")) cfg.fit_rates = j["fit_rates"].get<bool>();
  return cfg;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["model"] = model_to_json(config.model);
  j["G"] = functional_to_json(config.functional);
  j["schedule"] = schedule_to_json(config.schedule);
  j["n_grid"] = config.n_grid;
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  j["experiment_id"] = config.experiment_id;
  j["bound_params"] = {
      {"A", config.bounds.A}, {"B", config.bounds.B}, {"C", config.bounds.C}, {"c", config.bounds.c}};
  j["log_mode"] = log_mode_name(config.log_mode);
  json theorems = json::array();
  if (config.want_linear) theorems.push_back(1);
  if (config.want_integral) theorems.push_back(2);
  j["theorems"] = std::move(theorems);
  j["psi_grid_points"] = config.psi_grid_points;
  j["fit_rates"] = config.fit_rates;
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error("config JSON parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

json rate_fit_to_json(const RateFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.r_squared},
              {"slope_stderr", fit.slope_stderr}};
}

json report_to_json(const ExperimentReport& report, const ExperimentConfig& config) {
  json j;
  j["config"] = config_to_json(config);
  json per_n = json::array();
  for (const auto& rec : report.per_n) {
    json r;
    r["n"] = rec.n;
    r["k_n"] = rec.k_n;
    r["p_n"] = rec.p_n;
    r["r_n"] = rec.r_n;
    r["exceedance"] = {{"delta1", rec.exceed_delta1},
                       {"delta1_hat", rec.exceed_delta1_hat},
                       {"delta2", rec.exceed_delta2},
                       {"delta2_hat", rec.exceed_delta2_hat}};
    r["abs_r1_quantiles"] = {{"q50", rec.abs_r1.q50}, {"q90", rec.abs_r1.q90}, {"q99", rec.abs_r1.q99}};
    r["abs_r2_quantiles"] = {{"q50", rec.abs_r2.q50}, {"q90", rec.abs_r2.q90}, {"q99", rec.abs_r2.q99}};
    r["mean_psi"] = rec.mean_psi;
    per_n.push_back(std::move(r));
  }
  j["per_n"] = std::move(per_n);
  json fits;
  if (report.fit_abs_r1_median) fits["abs_r1_median"] = rate_fit_to_json(*report.fit_abs_r1_median);
  if (report.fit_abs_r2_median) fits["abs_r2_median"] = rate_fit_to_json(*report.fit_abs_r2_median);
  j["rate_fits"] = std::move(fits);
  return j;
}

json condition_report_to_json(const ConditionReport& report) {
  json j;
  j["condition_id"] = report.condition_id;
  j["verdict"] = verdict_name(report.verdict);
  j["grid"] = report.grid;
  j["values"] = report.values;
  if (report.witness) {
    j["witness"] = *report.witness;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

std::string samples_to_csv(std::span<const RemainderSample> samples) {
  std::string out =
      "n,k_n,p_n,r_n,xi,xi_hat,R1,R2,lhs2,delta1,delta1_hat,delta2,delta2_hat,psi_value,"
      "seed_path\n";
  for (const auto& s : samples) {
    out += std::to_string(s.n) + "," + std::to_string(s.k_n) + "," + format_double(s.p_n) + "," +
           std::to_string(s.r_n) + "," + format_double(s.xi) + "," + format_double(s.xi_hat) +
           "," + format_double(s.r1) + "," + format_double(s.r2) + "," + format_double(s.lhs2) +
           "," + format_double(s.delta1) + "," + format_double(s.delta1_hat) + "," +
           format_double(s.delta2) + "," + format_double(s.delta2_hat) + "," +
           format_double(s.psi_value) + "," + s.seed_path + "\n";
  }
  return out;
}

namespace {

// Grids approaching each boundary, ordered toward the limit.
std::vector<double> left_grid() { return {1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10}; }
std::vector<double> right_grid() {
  return {1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8, 1.0 - 1e-10};
}

// Coupled (u, o1) sequences with o1 -> 0 but o1 / min(u, 1-u) -> infinity;
// this is the regime that separates the heavy-log family from the others.
void coupled_perturbation(bool left, std::vector<double>& u, std::vector<double>& o1) {
  for (int j = 1; j <= 5; ++j) {
    const double m = std::pow(10.0, -j);
    u.push_back(left ? m : 1.0 - m);
    o1.push_back(std::sqrt(m));
  }
}

json slope_check_json(const RatioFunction& ratio, const std::vector<double>& grid) {
  return condition_report_to_json(check_slope_bounded(ratio, grid));
}

json perturbation_check_json(const RatioFunction& ratio, bool left) {
  std::vector<double> u, o1;
  coupled_perturbation(left, u, o1);
  return condition_report_to_json(check_perturbation_bounded(ratio, u, o1));
}

}  // namespace

json worked_examples_report() {
  json out;
  const double boundary = 1e-10;

  {  // Gumbel with g(x) = x^k
    json ex;
    ex["family"] = "gumbel";
    ex["g"] = "x^k";
    ex["boundary_u"] = boundary;
    const auto terms0 = gumbel_slope_terms(boundary, 0);
    ex["second_term_limit_u_to_0"] = -1.0;
    ex["second_term_at_boundary"] = terms0.term2;
    json by_k;
    for (const int k : {0, 1, 2}) {
      const auto t = gumbel_slope_terms(boundary, k);
      by_k[std::to_string(k)] = {{"term1", t.term1}, {"term2", t.term2}, {"total", t.total()}};
    }
    ex["slope_terms_at_boundary_by_k"] = std::move(by_k);
    const RatioFunction ratio(DistributionModel::gumbel(), SmoothFunctional::power_int(0));
    ex["slope_bounded_left"] = slope_check_json(ratio, left_grid());
    ex["slope_bounded_right"] = slope_check_json(ratio, right_grid());
    ex["perturbation_bounded_left"] = perturbation_check_json(ratio, true);
    out["example1"] = std::move(ex);
  }

  {  // exp-power upper tail with g(x) = x^rho: constant (rho+1-gamma)/gamma at u -> 0
    json ex;
    ex["family"] = "exp_power_tail";
    ex["g"] = "x^rho";
    ex["constant_formula"] = "(rho+1-gamma)/gamma";
    ex["boundary_u"] = boundary;
    json pairs = json::array();
    for (const auto& [rho, gamma] : std::vector<std::pair<double, double>>{
             {1.0, 2.0}, {2.0, 1.0}, {3.0, 2.0}}) {
      const auto t = exp_power_slope_terms(boundary, rho, gamma);
      pairs.push_back({{"rho", rho},
                       {"gamma", gamma},
                       {"constant", (rho + 1.0 - gamma) / gamma},
                       {"term1_at_boundary", t.term1},
                       {"term2_at_boundary", t.term2}});
    }
    ex["pairs_u_to_0"] = std::move(pairs);
    const RatioFunction ratio(DistributionModel::exp_power_tail(2.0),
                              SmoothFunctional::power_abs(1.0, 1));
    ex["slope_bounded_left"] = slope_check_json(ratio, left_grid());
    ex["slope_bounded_right"] = slope_check_json(ratio, right_grid());
    ex["perturbation_bounded_right"] = perturbation_check_json(ratio, false);
    out["example2"] = std::move(ex);
  }

  {  // Frechet-type with g(x) = x^rho: constant (rho+gamma+1)/gamma at u -> 1
    json ex;
    ex["family"] = "weibull_frechet";
    ex["g"] = "x^rho";
    ex["constant_formula"] = "(rho+gamma+1)/gamma";
    ex["boundary_u"] = 1.0 - boundary;
    json pairs = json::array();
    for (const auto& [rho, gamma] : std::vector<std::pair<double, double>>{
             {1.0, 1.0}, {2.0, 2.0}, {0.5, 1.5}}) {
      const auto t = frechet_slope_terms(1.0 - boundary, rho, gamma);
      pairs.push_back({{"rho", rho},
                       {"gamma", gamma},
                       {"constant", (rho + gamma + 1.0) / gamma},
                       {"term1_at_boundary", t.term1},
                       {"term2_at_boundary", t.term2}});
    }
    ex["pairs_u_to_1"] = std::move(pairs);
    const RatioFunction ratio(DistributionModel::weibull_frechet(1.0),
                              SmoothFunctional::power_abs(1.0, 1));
    ex["slope_bounded_left"] = slope_check_json(ratio, left_grid());
    ex["slope_bounded_right"] = slope_check_json(ratio, right_grid());
    ex["perturbation_bounded_right"] = perturbation_check_json(ratio, false);
    out["example3"] = std::move(ex);
  }

  {  // symmetric exp-power with g = |x|^rho: right tail matches example 2
    json ex;
    ex["family"] = "symmetric_exp_power";
    ex["g"] = "|x|^rho";
    const RatioFunction ratio(DistributionModel::symmetric_exp_power(2.0),
                              SmoothFunctional::power_abs(1.0, 1));
    ex["slope_at_right_boundary"] = scaled_v_slope(ratio, 1.0 - 1e-8);
    ex["slope_bounded_right"] = slope_check_json(ratio, right_grid());
    ex["perturbation_bounded_right"] = perturbation_check_json(ratio, false);
    out["example4"] = std::move(ex);
  }

  {  // logarithmic super-heavy tail: conditions fail; schedule criterion decides
    json ex;
    ex["family"] = "super_heavy_log";
    ex["g"] = "x^rho";
    const double C = 1.0, rho = 0.0;
    json slope = json::array();
    for (const double u : {0.9, 0.99, 0.999}) {
      slope.push_back({{"u", u}, {"closed_form", heavy_log_slope_closed(u, rho, C)}});
    }
    ex["closed_slope_u_to_1"] = std::move(slope);
    const RatioFunction ratio(DistributionModel::super_heavy_log(C),
                              SmoothFunctional::power_int(0));
    std::vector<double> grid = {0.9, 0.99, 0.999, 0.9999, 0.99999};
    ex["slope_bounded_right"] = slope_check_json(ratio, grid);
    ex["perturbation_bounded_right"] = perturbation_check_json(ratio, false);
    ex["perturbation_demo"] = {
        {"u", 0.999},
        {"o1", 0.01},
        {"ratio", heavy_log_perturbation_closed(0.999, 0.01, rho, C)}};
    std::vector<std::uint64_t> n_grid;
    for (int e = 3; e <= 13; ++e) {
      n_grid.push_back(static_cast<std::uint64_t>(std::llround(std::pow(10.0, e))));
    }
    const auto fast = QuantileSchedule::power(0.8, ScheduleSide::Right);
    const auto slow = QuantileSchedule::power(0.6, ScheduleSide::Right);
    ex["final_criterion"] = {
        {"r_n_pow_0_8", condition_report_to_json(check_heavy_tail_schedule(fast, n_grid))},
        {"r_n_pow_0_6", condition_report_to_json(check_heavy_tail_schedule(slow, n_grid))}};
    out["example5"] = std::move(ex);
  }

  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot open for writing: " + path);
  out << content;
  if (!out) throw error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bkq
