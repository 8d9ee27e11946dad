#include "bkq/remainder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bkq/errors.hpp"

namespace bkq {

void BoundParams::validate() const {
  if (!(A > 0.0 && B > 0.0 && C > 0.0 && c > 0.0)) {
    throw config_error("BoundParams: A, B, C, c must all be > 0");
  }
}

namespace {

struct LevelTerms {
  double p = 0.0;
  double xi = 0.0;
  double gf = 0.0;  // (g/f)(xi) = v(p)
};

// Resolves the level p = k/n, the population quantile and v(p), with the
// cross-check that cdf(quantile(p)) reproduces p.
LevelTerms level_terms(const DistributionModel& model, const SmoothFunctional& G,
                       std::uint64_t k, std::uint64_t n) {
  if (k < 1 || k > n) throw domain_error("remainder: k outside [1, n]");
  LevelTerms t;
  t.p = static_cast<double>(k) / static_cast<double>(n);
  if (!model.u_interval().contains(t.p)) {
    throw domain_error("remainder: p_n = " + std::to_string(t.p) +
                       " outside the smoothness window U");
  }
  t.xi = model.quantile(t.p);
  const double fq = model.density_at_quantile(t.p);
  if (!(fq > 0.0)) {
    throw singularity_error("remainder: density vanishes at the population quantile");
  }
  const double tol = model.low_precision() ? 1e-8 : 1e-12;
  if (std::abs(model.cdf(t.xi) - t.p) > tol) {
    throw singularity_error("remainder: cdf(quantile(p)) deviates from p; family inconsistent");
  }
  t.gf = G.deriv(t.xi) / fq;
  return t;
}

double between_sum_inplace(std::span<double> values, const SmoothFunctional& G, double xi,
                           std::uint64_t k, std::uint64_t big_n) {
  if (big_n == k) return 0.0;
  const std::size_t lo = static_cast<std::size_t>(std::min(k, big_n));
  const std::size_t hi = static_cast<std::size_t>(std::max(k, big_n));
  if (lo >= 1) {
    std::nth_element(values.begin(), values.begin() + (lo - 1), values.end());
  }
  std::nth_element(values.begin() + lo, values.begin() + (hi - 1), values.end());
  // Ranks lo+1 .. hi now occupy positions [lo, hi); sum in ascending value
  // order so the result does not depend on the partition layout.
  std::vector<double> slice(values.begin() + lo, values.begin() + hi);
  std::sort(slice.begin(), slice.end());
  const double g_xi = G.value(xi);
  long double acc = 0.0L;
  for (double x : slice) acc += static_cast<long double>(G.value(x) - g_xi);
  const double sign = big_n > k ? 1.0 : -1.0;
  return static_cast<double>(sign * acc) / static_cast<double>(values.size());
}

double log_of(LogMode mode, std::uint64_t r, std::uint64_t n) {
  return std::log(static_cast<double>(mode == LogMode::LogR ? r : n));
}

}  // namespace

double linear_remainder(const Sample& sample, const DistributionModel& model,
                        const SmoothFunctional& G, std::uint64_t k) {
  const auto t = level_terms(model, G, k, sample.n());
  const double xi_hat = kth_order_statistic(sample, static_cast<std::size_t>(k));
  const auto big_n = count_at_most(sample.values, t.xi);
  const double fn_minus_f = (static_cast<double>(big_n) - static_cast<double>(k)) /
                            static_cast<double>(sample.n());
  return (G.value(xi_hat) - G.value(t.xi)) + fn_minus_f * t.gf;
}

double between_sum(const Sample& sample, const DistributionModel& model,
                   const SmoothFunctional& G, std::uint64_t k) {
  const auto t = level_terms(model, G, k, sample.n());
  const auto big_n = count_at_most(sample.values, t.xi);
  std::vector<double> scratch(sample.values);
  return between_sum_inplace(scratch, G, t.xi, k, big_n);
}

double integral_remainder(const Sample& sample, const DistributionModel& model,
                          const SmoothFunctional& G, std::uint64_t k) {
  const auto t = level_terms(model, G, k, sample.n());
  const auto big_n = count_at_most(sample.values, t.xi);
  std::vector<double> scratch(sample.values);
  const double lhs = between_sum_inplace(scratch, G, t.xi, k, big_n);
  const double fn_minus_f = (static_cast<double>(big_n) - static_cast<double>(k)) /
                            static_cast<double>(sample.n());
  return lhs + 0.5 * fn_minus_f * fn_minus_f * t.gf;
}

double psi(const DistributionModel& model, const SmoothFunctional& G, double p_n,
           std::uint64_t r_n, std::uint64_t n, double C, LogMode log_mode,
           std::size_t grid_points) {
  if (!(C > 0.0)) throw domain_error("psi: C must be > 0");
  if (r_n < 1 || n < 2) throw domain_error("psi: needs r_n >= 1 and n >= 2");
  const double width = std::sqrt(static_cast<double>(r_n) * log_of(log_mode, r_n, n)) /
                       static_cast<double>(n);
  const Interval& u_win = model.u_interval();
  const double u_lo = p_n - C * width;
  const double u_hi = p_n + C * width;
  if (!(u_lo > 0.0 && u_hi < 1.0) || !u_win.contains(u_lo) || !u_win.contains(u_hi)) {
    throw domain_error("psi: perturbed level escapes U; n too small for this schedule");
  }
  std::size_t gp = std::max<std::size_t>(grid_points, 3);
  if (gp % 2 == 0) ++gp;  // keep t = 0 on the grid
  const RatioFunction ratio(model, G);
  const double v0 = ratio.v(p_n);
  double sup = 0.0;
  for (std::size_t i = 0; i < gp; ++i) {
    const double t = -C + 2.0 * C * static_cast<double>(i) / static_cast<double>(gp - 1);
    sup = std::max(sup, std::abs(ratio.v(p_n + t * width) - v0));
  }
  return sup;
}

double delta_linear(const BoundParams& params, double p_n, std::uint64_t r_n,
                    std::uint64_t n, double psi_value, double gf_at_xi) {
  params.validate();
  if (r_n < 2) throw domain_error("delta_linear: needs r_n >= 2 (log r_n > 0)");
  const double pq = p_n * (1.0 - p_n);
  const double ratio = log_of(params.log_mode, r_n, n) / static_cast<double>(n);
  return params.A * std::pow(pq, 0.25) * std::pow(ratio, 0.75) * std::abs(gf_at_xi) +
         params.B * std::sqrt(pq) * std::sqrt(ratio) * psi_value;
}

double delta_integral(const BoundParams& params, double p_n, std::uint64_t r_n,
                      std::uint64_t n, double psi_value, double gf_at_xi) {
  params.validate();
  if (r_n < 2) throw domain_error("delta_integral: needs r_n >= 2 (log r_n > 0)");
  const double pq = p_n * (1.0 - p_n);
  const double ratio = log_of(params.log_mode, r_n, n) / static_cast<double>(n);
  return params.A * std::pow(pq, 0.75) * std::pow(ratio, 1.25) * std::abs(gf_at_xi) +
         params.B * pq * ratio * psi_value;
}

double delta_single_term(const BoundParams& params, double p_n, std::uint64_t r_n,
                         std::uint64_t n, double gf_at_xi, int theorem, LogMode log_mode) {
  params.validate();
  if (theorem != 1 && theorem != 2) throw domain_error("delta_single_term: theorem must be 1 or 2");
  if (r_n < 2) throw domain_error("delta_single_term: needs r_n >= 2");
  const double pq = p_n * (1.0 - p_n);
  const double ratio = log_of(log_mode, r_n, n) / static_cast<double>(n);
  const double e1 = theorem == 1 ? 0.25 : 0.75;
  const double e2 = theorem == 1 ? 0.75 : 1.25;
  return params.A * std::pow(pq, e1) * std::pow(ratio, e2) * std::abs(gf_at_xi);
}

GridPointTerms precompute_grid_point(const DistributionModel& model,
                                     const SmoothFunctional& G, std::uint64_t n,
                                     std::uint64_t k, const BoundParams& params,
                                     std::size_t psi_grid_points) {
  params.validate();
  if (n < 2 || k < 1 || k > n - 1) {
    throw domain_error("grid point: needs 1 <= k <= n-1");
  }
  GridPointTerms t;
  t.n = n;
  t.k = k;
  t.r = std::min(k, n - k);
  const auto lv = level_terms(model, G, k, n);
  t.p = lv.p;
  t.xi = lv.xi;
  t.gf_at_xi = lv.gf;
  t.psi_log_r = psi(model, G, t.p, t.r, n, params.C, LogMode::LogR, psi_grid_points);
  t.psi_log_n = psi(model, G, t.p, t.r, n, params.C, LogMode::LogN, psi_grid_points);
  t.psi_value = params.log_mode == LogMode::LogR ? t.psi_log_r : t.psi_log_n;

  BoundParams mode_r = params;
  mode_r.log_mode = LogMode::LogR;
  BoundParams mode_n = params;
  mode_n.log_mode = LogMode::LogN;
  t.delta1 = delta_linear(mode_r, t.p, t.r, n, t.psi_log_r, t.gf_at_xi);
  t.delta1_hat = delta_linear(mode_n, t.p, t.r, n, t.psi_log_n, t.gf_at_xi);
  t.delta2 = delta_integral(mode_r, t.p, t.r, n, t.psi_log_r, t.gf_at_xi);
  t.delta2_hat = delta_integral(mode_n, t.p, t.r, n, t.psi_log_n, t.gf_at_xi);
  return t;
}

RemainderSample evaluate_remainders(std::vector<double>& values, const SmoothFunctional& G,
                                    const GridPointTerms& terms, const SeedPath& path,
                                    bool want_linear, bool want_integral) {
  const auto n = values.size();
  if (n != terms.n) throw domain_error("evaluate_remainders: sample size != grid point n");
  RemainderSample out;
  out.n = terms.n;
  out.k_n = terms.k;
  out.p_n = terms.p;
  out.r_n = terms.r;
  out.xi = terms.xi;
  out.delta1 = terms.delta1;
  out.delta1_hat = terms.delta1_hat;
  out.delta2 = terms.delta2;
  out.delta2_hat = terms.delta2_hat;
  out.psi_value = terms.psi_value;
  out.seed_path = path.to_string();

  const auto big_n = count_at_most(values, terms.xi);
  out.xi_hat = kth_order_statistic_inplace(values, static_cast<std::size_t>(terms.k));
  const double fn_minus_f = (static_cast<double>(big_n) - static_cast<double>(terms.k)) /
                            static_cast<double>(n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.r1 = want_linear
               ? (G.value(out.xi_hat) - G.value(terms.xi)) + fn_minus_f * terms.gf_at_xi
               : nan;
  if (want_integral) {
    out.lhs2 = between_sum_inplace(values, G, terms.xi, terms.k, big_n);
    out.r2 = out.lhs2 + 0.5 * fn_minus_f * fn_minus_f * terms.gf_at_xi;
  } else {
    out.lhs2 = nan;
    out.r2 = nan;
  }
  return out;
}

}  // namespace bkq
