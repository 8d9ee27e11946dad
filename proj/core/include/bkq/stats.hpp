#ifndef BKQ_STATS_HPP
#define BKQ_STATS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace bkq {

// Left-continuous empirical quantile of sorted data: x_(ceil(q*m)).
double sorted_quantile(std::span<const double> sorted, double q);

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS statistic against a reference cdf.
double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

// Asymptotic two-sample critical value c(level) * sqrt((m+n)/(m*n)).
double ks_two_sample_critical(std::size_t m, std::size_t n, double level);
// One-sample version c(level) / sqrt(n).
double ks_one_sample_critical(std::size_t n, double level);

double beta_cdf(double a, double b, double x);
double binomial_pmf(std::uint64_t n, double p, std::uint64_t k);

// Ordinary least squares of log(magnitude) on log(n).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

// points = (n, magnitude); requires >= 3 points with magnitude > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

}  // namespace bkq

#endif  // BKQ_STATS_HPP
