#ifndef BKQ_DISTRIBUTION_HPP
#define BKQ_DISTRIBUTION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace bkq {

enum class Family {
  Uniform01,
  Gumbel,
  ExpPowerTail,       // F(x) = 1 - exp(-x^gamma), x >= 0
  WeibullFrechet,     // F(x) = exp(-x^-gamma),    x >= 0
  SymmetricExpPower,  // density C_gamma exp(-|x|^gamma) on R
  SuperHeavyLog,      // F(x) = 1 - C/log x for x >= x0; no finite moments
  Custom,
};

std::string family_name(Family f);

// Open interval of quantile levels on which the density is known positive.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double u) const { return u > lo && u < hi; }
};

// User-supplied family. Only the quantile is required; everything else is
// recovered numerically (bracketed inversion / differencing) at reduced
// precision unless explicit closures are given.
struct CustomClosures {
  std::function<double(double)> quantile;            // required
  std::function<double(double)> cdf;                 // optional
  std::function<double(double)> density;             // optional
  std::function<double(double)> density_at_quantile; // optional, f(F^-1(u))
  std::function<double(double)> quantile_log_deriv;  // optional, d/du log|F^-1(u)|
  std::function<double(double)> density_at_quantile_log_deriv;  // optional
  Interval u_interval{0.0, 1.0};
  std::optional<double> tail_exponent_left;
  std::optional<double> tail_exponent_right;
  std::string label = "custom";
};

// Analytic distribution: exact cdf F, left-continuous inverse F^-1 and
// density f for each built-in family. Values are immutable and cheap to
// copy; all evaluation is pure, so models can be shared across threads.
class DistributionModel {
 public:
  static DistributionModel uniform01();
  static DistributionModel gumbel();
  static DistributionModel exp_power_tail(double gamma);
  static DistributionModel weibull_frechet(double gamma);
  static DistributionModel symmetric_exp_power(double gamma);
  // x0 defaults to exp(C), the smallest admissible cutoff, where the
  // logarithmic tail formula carries the full unit mass. For x0 > exp(C)
  // the mass below the cutoff is realized uniformly on (0, x0) so that F
  // is a proper continuous df; the tail above x0 is exactly 1 - C/log x.
  static DistributionModel super_heavy_log(double C, std::optional<double> x0 = {});
  static DistributionModel custom(CustomClosures closures);
  // Left-tail Pareto: F(x) = (-x)^-gamma for x <= -1. Ships as a Custom
  // family with full-precision closures; its density is regularly varying
  // at -infinity with index -(1+gamma).
  static DistributionModel pareto_left(double gamma);

  Family family() const { return family_; }
  const std::string& label() const { return label_; }

  // F(x); right-continuous and nondecreasing.
  double cdf(double x) const;
  // F^-1(u) = inf{x : F(x) >= u}. Throws domain_error unless 0 <= u <= 1;
  // u is then clamped to [1e-300, 1 - 2^-53] before evaluation.
  double quantile(double u) const;
  // f(x) = F'(x); returns 0 outside the support.
  double density(double x) const;

  // f(F^-1(u)) via the per-family closed form (avoids the round trip).
  double density_at_quantile(double u) const;
  // d/du log|F^-1(u)| and d/du log f(F^-1(u)); closed forms where known.
  // These keep ratio computations finite for families whose quantile or
  // density leaves double range long before the ratios do.
  double quantile_log_deriv(double u) const;
  double density_at_quantile_log_deriv(double u) const;
  // log|F^-1(u)| and log f(F^-1(u)), exact in the tails.
  double log_abs_quantile(double u) const;
  double log_density_at_quantile(double u) const;
  // Sign of F^-1(u) (-1, 0, +1).
  int quantile_sign(double u) const;

  // f'(x)/f(x); used for analytic derivatives of g/f compositions.
  double density_log_deriv(double x) const;

  const Interval& u_interval() const { return u_interval_; }
  std::optional<double> tail_exponent_left() const { return tail_left_; }
  std::optional<double> tail_exponent_right() const { return tail_right_; }
  // True when cdf/density come from numeric inversion of a Custom quantile.
  bool low_precision() const;

  double param_gamma() const { return gamma_; }
  double param_C() const { return C_; }
  double param_x0() const { return x0_; }

 private:
  DistributionModel() = default;

  Family family_ = Family::Uniform01;
  std::string label_;
  double gamma_ = 0.0;
  double C_ = 0.0;
  double x0_ = 0.0;
  double u0_ = 0.0;        // SuperHeavyLog: F(x0), mass below the cutoff
  double sym_norm_ = 0.0;  // SymmetricExpPower: C_gamma
  Interval u_interval_{0.0, 1.0};
  std::optional<double> tail_left_;
  std::optional<double> tail_right_;
  std::shared_ptr<const CustomClosures> closures_;
};

}  // namespace bkq

#endif  // BKQ_DISTRIBUTION_HPP
