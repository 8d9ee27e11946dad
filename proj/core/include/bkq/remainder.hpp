#ifndef BKQ_REMAINDER_HPP
#define BKQ_REMAINDER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bkq/distribution.hpp"
#include "bkq/functional.hpp"
#include "bkq/sampling.hpp"

namespace bkq {

enum class LogMode { LogR, LogN };

// Constants of the exceedance bounds. The theory only proves existence of
// A, B, C for each target exponent c; concrete values come from user config
// or from calibrate_constants().
struct BoundParams {
  double A = 1.0;
  double B = 1.0;
  double C = 2.0;
  double c = 2.0;
  LogMode log_mode = LogMode::LogR;

  void validate() const;
};

// One replication's exact remainder values and bound terms.
struct RemainderSample {
  std::uint64_t n = 0;
  std::uint64_t k_n = 0;
  double p_n = 0.0;
  std::uint64_t r_n = 0;
  double xi = 0.0;      // population quantile F^-1(p_n)
  double xi_hat = 0.0;  // empirical quantile X_{k_n:n}
  double r1 = 0.0;      // remainder of the linear representation
  double r2 = 0.0;      // remainder of the between-sum representation
  double lhs2 = 0.0;    // the between-sum itself (left side of the 2nd identity)
  double delta1 = 0.0;
  double delta1_hat = 0.0;
  double delta2 = 0.0;
  double delta2_hat = 0.0;
  double psi_value = 0.0;
  std::string seed_path;
};

// Remainder of the linear representation, solved exactly from
//   G(xi_hat) - G(xi) = -[F_n(xi) - F(xi)] (g/f)(xi) + R.
// F(xi) equals p_n = k/n analytically for continuous families; the
// implementation cross-checks cdf(quantile(p_n)) against p_n and keeps the
// count difference (N - k)/n as an exact integer ratio.
double linear_remainder(const Sample& sample, const DistributionModel& model,
                        const SmoothFunctional& G, std::uint64_t k);

// Signed sum over the order statistics with ranks strictly between k and
// N = n F_n(xi) (upper rank inclusive), divided by n:
//   sgn(N - k)/n * sum_{i=(k^N)+1}^{k v N} (G(X_{i:n}) - G(xi)).
// Equals the empirical Stieltjes integral of G(x) - G(xi) from xi_hat to xi.
// Returns exactly 0 when N = k.
double between_sum(const Sample& sample, const DistributionModel& model,
                   const SmoothFunctional& G, std::uint64_t k);

// Remainder of the between-sum representation:
//   R = between_sum + 1/2 [F_n(xi) - F(xi)]^2 (g/f)(xi).
double integral_remainder(const Sample& sample, const DistributionModel& model,
                          const SmoothFunctional& G, std::uint64_t k);

// Oscillation modulus of v = (g/f) o F^-1 around p_n at the local scale:
//   psi = sup_{|t| <= C} | v(p_n + t sqrt(r_n log(.) ) / n) - v(p_n) |
// with log(.) = log r_n (LogR) or log n (LogN). The supremum is taken over a
// uniform grid of grid_points values of t including both endpoints and 0.
// Throws domain_error when the perturbed level leaves (0,1) or the model's
// smoothness window U (the schedule needs larger n).
double psi(const DistributionModel& model, const SmoothFunctional& G, double p_n,
           std::uint64_t r_n, std::uint64_t n, double C, LogMode log_mode,
           std::size_t grid_points = 2001);

// Bound for the linear representation:
//   A (p(1-p))^{1/4} (log(.)/n)^{3/4} |g/f|(xi) + B (p(1-p))^{1/2} (log(.)/n)^{1/2} psi.
// Requires r_n >= 2 so log r_n > 0.
double delta_linear(const BoundParams& params, double p_n, std::uint64_t r_n,
                    std::uint64_t n, double psi_value, double gf_at_xi);

// Bound for the between-sum representation: exponents (3/4, 5/4) on the
// first term and (1, 1) on the second.
double delta_integral(const BoundParams& params, double p_n, std::uint64_t r_n,
                      std::uint64_t n, double psi_value, double gf_at_xi);

// Single-term bound valid when the psi term is absorbed by the first one;
// theorem selects the exponent pair (1 -> 1/4,3/4; 2 -> 3/4,5/4).
double delta_single_term(const BoundParams& params, double p_n, std::uint64_t r_n,
                         std::uint64_t n, double gf_at_xi, int theorem, LogMode log_mode);

// Everything about one (n, k_n) grid point that does not depend on the
// sample: quantile level data, v(p_n), both psi variants and all four
// bounds. Shared across replications.
struct GridPointTerms {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t r = 0;
  double p = 0.0;
  double xi = 0.0;
  double gf_at_xi = 0.0;
  double psi_log_r = 0.0;
  double psi_log_n = 0.0;
  double psi_value = 0.0;  // the variant matching params.log_mode
  double delta1 = 0.0;
  double delta1_hat = 0.0;
  double delta2 = 0.0;
  double delta2_hat = 0.0;
};

GridPointTerms precompute_grid_point(const DistributionModel& model,
                                     const SmoothFunctional& G, std::uint64_t n,
                                     std::uint64_t k, const BoundParams& params,
                                     std::size_t psi_grid_points);

// Workspace evaluation of one replication: `values` holds the sample and is
// reordered in place (selection passes), avoiding copies at large n.
RemainderSample evaluate_remainders(std::vector<double>& values, const SmoothFunctional& G,
                                    const GridPointTerms& terms, const SeedPath& path,
                                    bool want_linear, bool want_integral);

}  // namespace bkq

#endif  // BKQ_REMAINDER_HPP
