#include "bkq/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>

#include "bkq/errors.hpp"

namespace bkq {

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw domain_error("sorted_quantile: empty data");
  if (!(q > 0.0 && q <= 1.0)) throw domain_error("sorted_quantile: q outside (0,1]");
  const auto m = sorted.size();
  auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(m)));
  idx = std::max<std::size_t>(1, std::min(idx, m));
  return sorted[idx - 1];
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw domain_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw domain_error("ks_one_sample: empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

namespace {

// Kolmogorov critical coefficients for the usual levels.
double ks_coefficient(double level) {
  if (level == 0.10) return 1.22;
  if (level == 0.05) return 1.36;
  if (level == 0.01) return 1.63;
  if (level == 0.001) return 1.95;
  // K(c) = 1 - 2 sum (-1)^{k-1} exp(-2 k^2 c^2); invert by bisection.
  double lo = 0.3, hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double tail = 0.0;
    for (int k = 1; k <= 100; ++k) {
      tail += (k % 2 == 1 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * mid * mid);
    }
    (tail > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ks_two_sample_critical(std::size_t m, std::size_t n, double level) {
  const double mm = static_cast<double>(m), nn = static_cast<double>(n);
  return ks_coefficient(level) * std::sqrt((mm + nn) / (mm * nn));
}

double ks_one_sample_critical(std::size_t n, double level) {
  return ks_coefficient(level) / std::sqrt(static_cast<double>(n));
}

double beta_cdf(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double binomial_pmf(std::uint64_t n, double p, std::uint64_t k) {
  if (k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  const double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                         std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
                         (nd - kd) * std::log1p(-p);
  return std::exp(log_pmf);
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw domain_error("fit_rate: needs >= 3 points");
  const auto m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second > 0.0)) {
      throw domain_error("fit_rate: magnitudes must be positive");
    }
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw domain_error("fit_rate: degenerate abscissae");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  fit.slope_stderr = points.size() > 2 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
  return fit;
}

}  // namespace bkq
