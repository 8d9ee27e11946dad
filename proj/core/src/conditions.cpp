#include "bkq/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "bkq/errors.hpp"

namespace bkq {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

bool decreasing_tail(const std::vector<double>& v) {
  for (std::size_t i = v.size() / 2; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] < v[i])) return false;
  }
  return true;
}

bool increasing_tail(const std::vector<double>& v) {
  for (std::size_t i = v.size() / 2; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] > v[i])) return false;
  }
  return true;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Verdict for a "sequence tends to zero" claim: monotone decay on the tail
// half plus a factor-10 drop overall.
void vanishing_verdict(ConditionReport& rep) {
  const auto& v = rep.values;
  const double first = v.front(), last = v.back();
  if (decreasing_tail(v) && last < 0.1 * first) {
    rep.verdict = Verdict::Holds;
  } else if (last >= 0.5 * first && last >= v[v.size() - 2]) {
    rep.verdict = Verdict::Fails;
    rep.witness = rep.grid[argmax(v)];
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
}

// Verdict for an "O(.)"-boundedness claim: stay within 10x the initial value
// and do not keep growing at the end of the grid.
void bounded_verdict(ConditionReport& rep) {
  const auto& v = rep.values;
  const double first = v.front(), last = v.back();
  const double head = std::max(v[0], v[1]);
  const double peak = v[argmax(v)];
  if (peak <= 10.0 * first && last <= 2.0 * head) {
    rep.verdict = Verdict::Holds;
  } else if ((last > 10.0 * first && last >= v[v.size() - 2]) ||
             (last > 2.0 * head && increasing_tail(v))) {
    rep.verdict = Verdict::Fails;
    rep.witness = rep.grid[argmax(v)];
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
}

void require_grid(std::span<const std::uint64_t> n_grid, const char* who) {
  if (n_grid.size() < 3) throw domain_error(std::string(who) + ": n_grid needs >= 3 points");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i) {
    if (n_grid[i + 1] <= n_grid[i]) {
      throw domain_error(std::string(who) + ": n_grid must be increasing");
    }
  }
}

double stable_log(double u) { return u < 0.5 ? std::log(u) : std::log1p(u - 1.0); }
double stable_log1m(double u) { return u < 0.5 ? std::log1p(-u) : std::log(1.0 - u); }

}  // namespace

ConditionReport check_log_over_depth(const QuantileSchedule& schedule,
                                     std::span<const std::uint64_t> n_grid) {
  require_grid(n_grid, "check_log_over_depth");
  ConditionReport rep;
  rep.condition_id = "log_n_over_depth_vanishes";
  for (const auto n : n_grid) {
    const auto r = schedule.depth(n);
    if (r < 1) throw schedule_error("check_log_over_depth: depth < 1");
    rep.grid.push_back(static_cast<double>(n));
    rep.values.push_back(std::log(static_cast<double>(n)) / static_cast<double>(r));
  }
  vanishing_verdict(rep);
  return rep;
}

double scaled_v_slope(const RatioFunction& ratio, double u) {
  if (!(u > 0.0 && u < 1.0)) throw domain_error("scaled_v_slope: u outside (0,1)");
  return ratio.log_slope(u) * std::min(u, 1.0 - u);
}

double v_perturbation_ratio(const RatioFunction& ratio, double u, double o1) {
  if (o1 == 0.0) return 1.0;
  const double m = std::min(u, 1.0 - u);
  const double u2 = u + m * o1;
  if (!(u2 > 0.0 && u2 < 1.0) || !ratio.model().u_interval().contains(u2)) {
    throw domain_error("v_perturbation_ratio: perturbed level escapes U");
  }
  const int s1 = ratio.sign_v(u), s2 = ratio.sign_v(u2);
  if (s1 == 0) throw singularity_error("v_perturbation_ratio: v(u) = 0");
  return std::exp(ratio.log_abs_v(u2) - ratio.log_abs_v(u)) * s1 * s2;
}

ConditionReport check_psi_absorption(const DistributionModel& model, const SmoothFunctional& G,
                                     const QuantileSchedule& schedule,
                                     std::span<const std::uint64_t> n_grid, double C,
                                     LogMode log_mode, std::size_t psi_grid_points) {
  require_grid(n_grid, "check_psi_absorption");
  ConditionReport rep;
  rep.condition_id = log_mode == LogMode::LogR ? "psi_absorption_log_r" : "psi_absorption_log_n";
  const RatioFunction ratio(model, G);
  for (const auto n : n_grid) {
    const auto k = schedule.k(n);
    const auto r = std::min(k, n - k);
    const double p = static_cast<double>(k) / static_cast<double>(n);
    const double psi_val = psi(model, G, p, r, n, C, log_mode, psi_grid_points);
    const double lg = std::log(static_cast<double>(log_mode == LogMode::LogR ? r : n));
    const double unit =
        std::pow(lg / static_cast<double>(r), 0.25) * std::abs(ratio.v(p));
    rep.grid.push_back(static_cast<double>(n));
    rep.values.push_back(psi_val / unit);
  }
  bounded_verdict(rep);
  return rep;
}

ConditionReport check_increment_regularity(const std::function<double(double)>& f,
                                           std::span<const double> x_grid,
                                           const std::function<double(double)>& dx_rule) {
  if (x_grid.size() < 3) throw domain_error("check_increment_regularity: grid needs >= 3 points");
  ConditionReport rep;
  rep.condition_id = "srv_increment_bound";
  for (const double x : x_grid) {
    const double dx = dx_rule ? dx_rule(x)
                              : (x >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x), 0.6);
    const double fx = f(x);
    if (!(std::abs(fx) > 0.0)) {
      throw singularity_error("check_increment_regularity: f vanishes on the grid");
    }
    const double val = std::abs(f(x + dx) - fx) /
                       (std::abs(fx) * std::sqrt(std::abs(dx / x)));
    rep.grid.push_back(x);
    rep.values.push_back(val);
  }
  bounded_verdict(rep);
  return rep;
}

ConditionReport check_heavy_tail_schedule(const QuantileSchedule& schedule,
                                          std::span<const std::uint64_t> n_grid) {
  require_grid(n_grid, "check_heavy_tail_schedule");
  ConditionReport rep;
  rep.condition_id = "heavy_tail_intermediate_criterion";
  for (const auto n : n_grid) {
    const auto r = schedule.depth(n);
    rep.grid.push_back(static_cast<double>(n));
    rep.values.push_back(std::pow(static_cast<double>(n), 2.0 / 3.0) *
                         std::cbrt(std::log(static_cast<double>(r))) /
                         static_cast<double>(r));
  }
  vanishing_verdict(rep);
  return rep;
}

ConditionReport check_slope_bounded(const RatioFunction& ratio, std::span<const double> u_grid) {
  if (u_grid.size() < 3) throw domain_error("check_slope_bounded: grid needs >= 3 points");
  ConditionReport rep;
  rep.condition_id = "scaled_slope_bounded";
  for (const double u : u_grid) {
    rep.grid.push_back(u);
    rep.values.push_back(std::abs(scaled_v_slope(ratio, u)));
  }
  bounded_verdict(rep);
  return rep;
}

ConditionReport check_perturbation_bounded(const RatioFunction& ratio,
                                           std::span<const double> u_grid,
                                           std::span<const double> o1_seq) {
  if (u_grid.size() != o1_seq.size() || u_grid.size() < 3) {
    throw domain_error("check_perturbation_bounded: needs matched grids of >= 3 points");
  }
  ConditionReport rep;
  rep.condition_id = "perturbation_ratio_bounded";
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    rep.grid.push_back(u_grid[i]);
    rep.values.push_back(std::abs(v_perturbation_ratio(ratio, u_grid[i], o1_seq[i])));
  }
  bounded_verdict(rep);
  return rep;
}

SlopeTerms gumbel_slope_terms(double u, int k) {
  const double m = std::min(u, 1.0 - u);
  const double lnu = stable_log(u);
  const double x = -std::log(-lnu);  // F^-1(u)
  SlopeTerms t;
  t.term1 = -static_cast<double>(k) * m / (x * u * lnu);
  t.term2 = m / (-u * lnu) * (1.0 + lnu);
  return t;
}

SlopeTerms exp_power_slope_terms(double u, double rho, double gamma) {
  const double m = std::min(u, 1.0 - u);
  const double ln1mu = stable_log1m(u);
  SlopeTerms t;
  t.term1 = (rho + 1.0 - gamma) / gamma * m / (-(1.0 - u) * ln1mu);
  t.term2 = m / (1.0 - u);
  return t;
}

SlopeTerms frechet_slope_terms(double u, double rho, double gamma) {
  const double m = std::min(u, 1.0 - u);
  const double lnu = stable_log(u);
  SlopeTerms t;
  t.term1 = -(rho + gamma + 1.0) / gamma * m / (u * lnu);
  t.term2 = -m / u;
  return t;
}

double heavy_log_slope_closed(double u, double rho, double C) {
  return C * (rho + 1.0) / (1.0 - u) + 2.0;
}

double heavy_log_perturbation_closed(double u, double o1, double rho, double C) {
  const double w = 1.0 - u;
  const double shrink = 1.0 - o1;  // the perturbed complement is w * (1 - o1)
  return std::exp(C * (rho + 1.0) * o1 / (w * shrink)) / (shrink * shrink);
}

}  // namespace bkq
