#include "bkq/distribution.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

#include "bkq/errors.hpp"

namespace bkq {

namespace {

constexpr double kUnitLo = 1e-300;
const double kUnitHi = 1.0 - 0x1.0p-53;  // largest double below 1

// -log(u) and -log(1-u), accurate from both ends of (0,1). For u >= 1/2 the
// complement 1-u is exact in IEEE arithmetic (Sterbenz), so no precision is
// lost approaching either boundary.
double neg_log(double u) { return u < 0.5 ? -std::log(u) : -std::log1p(u - 1.0); }
double neg_log1m(double u) { return u < 0.5 ? -std::log1p(-u) : -std::log(1.0 - u); }
double complement(double u) { return 1.0 - u; }  // exact for u >= 1/2 (Sterbenz)

double clamp_unit(double u, const char* who) {
  if (std::isnan(u) || u < 0.0 || u > 1.0) {
    throw domain_error(std::string(who) + ": u outside [0,1]");
  }
  if (u < kUnitLo) return kUnitLo;
  if (u > kUnitHi) return kUnitHi;
  return u;
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Uniform01: return "uniform01";
    case Family::Gumbel: return "gumbel";
    case Family::ExpPowerTail: return "exp_power_tail";
    case Family::WeibullFrechet: return "weibull_frechet";
    case Family::SymmetricExpPower: return "symmetric_exp_power";
    case Family::SuperHeavyLog: return "super_heavy_log";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

DistributionModel DistributionModel::uniform01() {
  DistributionModel m;
  m.family_ = Family::Uniform01;
  m.label_ = "uniform01";
  return m;
}

DistributionModel DistributionModel::gumbel() {
  DistributionModel m;
  m.family_ = Family::Gumbel;
  m.label_ = "gumbel";
  return m;
}

DistributionModel DistributionModel::exp_power_tail(double gamma) {
  if (!(gamma > 0.0)) throw config_error("exp_power_tail: gamma must be > 0");
  DistributionModel m;
  m.family_ = Family::ExpPowerTail;
  m.gamma_ = gamma;
  m.label_ = "exp_power_tail";
  return m;
}

DistributionModel DistributionModel::weibull_frechet(double gamma) {
  if (!(gamma > 0.0)) throw config_error("weibull_frechet: gamma must be > 0");
  DistributionModel m;
  m.family_ = Family::WeibullFrechet;
  m.gamma_ = gamma;
  m.label_ = "weibull_frechet";
  return m;
}

DistributionModel DistributionModel::symmetric_exp_power(double gamma) {
  if (!(gamma > 0.0)) throw config_error("symmetric_exp_power: gamma must be > 0");
  DistributionModel m;
  m.family_ = Family::SymmetricExpPower;
  m.gamma_ = gamma;
  m.sym_norm_ = gamma / (2.0 * std::tgamma(1.0 / gamma));
  m.label_ = "symmetric_exp_power";
  return m;
}

DistributionModel DistributionModel::super_heavy_log(double C, std::optional<double> x0) {
  if (!(C > 0.0)) throw config_error("super_heavy_log: C must be > 0");
  const double cutoff = x0.value_or(std::exp(C));
  if (!(cutoff > 1.0) || std::log(cutoff) < C * (1.0 - 1e-12)) {
    throw config_error("super_heavy_log: requires x0 >= exp(C) so that F(x0) >= 0");
  }
  DistributionModel m;
  m.family_ = Family::SuperHeavyLog;
  m.C_ = C;
  m.x0_ = cutoff;
  m.u0_ = std::max(0.0, 1.0 - C / std::log(cutoff));
  m.u_interval_ = Interval{m.u0_, 1.0};
  m.tail_right_ = -1.0;  // density C/(x log^2 x) is regularly varying of index -1
  m.label_ = "super_heavy_log";
  return m;
}

DistributionModel DistributionModel::custom(CustomClosures closures) {
  if (!closures.quantile) {
    throw unsupported_error("custom family requires a quantile closure");
  }
  DistributionModel m;
  m.family_ = Family::Custom;
  m.u_interval_ = closures.u_interval;
  m.tail_left_ = closures.tail_exponent_left;
  m.tail_right_ = closures.tail_exponent_right;
  m.label_ = closures.label;
  m.closures_ = std::make_shared<const CustomClosures>(std::move(closures));
  return m;
}

DistributionModel DistributionModel::pareto_left(double gamma) {
  if (!(gamma > 0.0)) throw config_error("pareto_left: gamma must be > 0");
  CustomClosures c;
  c.quantile = [gamma](double u) { return -std::pow(u, -1.0 / gamma); };
  c.cdf = [gamma](double x) { return x <= -1.0 ? std::pow(-x, -gamma) : 1.0; };
  c.density = [gamma](double x) {
    return x <= -1.0 ? gamma * std::pow(-x, -(1.0 + gamma)) : 0.0;
  };
  c.density_at_quantile = [gamma](double u) {
    return gamma * std::pow(u, 1.0 + 1.0 / gamma);
  };
  c.quantile_log_deriv = [gamma](double u) { return -1.0 / (gamma * u); };
  c.density_at_quantile_log_deriv = [gamma](double u) {
    return (1.0 + 1.0 / gamma) / u;
  };
  c.tail_exponent_left = -(1.0 + gamma);
  c.label = "pareto_left";
  DistributionModel m = custom(std::move(c));
  m.gamma_ = gamma;
  return m;
}

bool DistributionModel::low_precision() const {
  if (family_ != Family::Custom) return false;
  return !(closures_->cdf && closures_->density && closures_->density_at_quantile);
}

double DistributionModel::cdf(double x) const {
  switch (family_) {
    case Family::Uniform01:
      return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    case Family::Gumbel:
      return std::exp(-std::exp(-x));
    case Family::ExpPowerTail:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, gamma_));
    case Family::WeibullFrechet:
      return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -gamma_));
    case Family::SymmetricExpPower: {
      if (x == 0.0) return 0.5;
      const double tail = boost::math::gamma_p(1.0 / gamma_, std::pow(std::abs(x), gamma_));
      return 0.5 + 0.5 * (x > 0.0 ? tail : -tail);
    }
    case Family::SuperHeavyLog: {
      if (x < 0.0) return 0.0;
      if (x >= x0_) return 1.0 - C_ / std::log(x);
      return u0_ * x / x0_;
    }
    case Family::Custom: {
      if (closures_->cdf) return closures_->cdf(x);
      // Bracketed inversion of the quantile closure (lower precision).
      double lo = kUnitLo, hi = kUnitHi;
      if (closures_->quantile(lo) > x) return 0.0;
      if (closures_->quantile(hi) <= x) return 1.0;
      for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (closures_->quantile(mid) <= x ? lo : hi) = mid;
      }
      return lo;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DistributionModel::quantile(double u) const {
  u = clamp_unit(u, "quantile");
  switch (family_) {
    case Family::Uniform01:
      return u;
    case Family::Gumbel:
      return -std::log(neg_log(u));
    case Family::ExpPowerTail:
      return std::pow(neg_log1m(u), 1.0 / gamma_);
    case Family::WeibullFrechet:
      return std::pow(neg_log(u), -1.0 / gamma_);
    case Family::SymmetricExpPower: {
      const double s = 2.0 * u - 1.0;
      if (s == 0.0) return 0.0;
      const double t = boost::math::gamma_p_inv(1.0 / gamma_, std::abs(s));
      const double mag = std::pow(t, 1.0 / gamma_);
      return s > 0.0 ? mag : -mag;
    }
    case Family::SuperHeavyLog: {
      if (u < u0_) return x0_ * u / u0_;
      return std::exp(C_ / complement(u));
    }
    case Family::Custom:
      return closures_->quantile(u);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DistributionModel::density(double x) const {
  switch (family_) {
    case Family::Uniform01:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case Family::Gumbel:
      return std::exp(-x - std::exp(-x));
    case Family::ExpPowerTail:
      return x <= 0.0 ? 0.0 : gamma_ * std::pow(x, gamma_ - 1.0) * std::exp(-std::pow(x, gamma_));
    case Family::WeibullFrechet:
      return x <= 0.0 ? 0.0
                      : gamma_ * std::pow(x, -gamma_ - 1.0) * std::exp(-std::pow(x, -gamma_));
    case Family::SymmetricExpPower:
      return sym_norm_ * std::exp(-std::pow(std::abs(x), gamma_));
    case Family::SuperHeavyLog: {
      if (x < 0.0 || (x > 0.0 && x < x0_ && u0_ == 0.0)) return 0.0;
      if (x >= x0_) {
        const double lg = std::log(x);
        return C_ / (x * lg * lg);
      }
      return x <= 0.0 ? 0.0 : u0_ / x0_;
    }
    case Family::Custom: {
      if (closures_->density) return closures_->density(x);
      const double h = 1e-6 * (1.0 + std::abs(x));
      return (cdf(x + h) - cdf(x - h)) / (2.0 * h);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DistributionModel::density_at_quantile(double u) const {
  u = clamp_unit(u, "density_at_quantile");
  switch (family_) {
    case Family::Uniform01:
      return 1.0;
    case Family::Gumbel:
      return u * neg_log(u);
    case Family::ExpPowerTail: {
      const double L = neg_log1m(u);
      return gamma_ * complement(u) * std::pow(L, (gamma_ - 1.0) / gamma_);
    }
    case Family::WeibullFrechet: {
      const double M = neg_log(u);
      return gamma_ * u * std::pow(M, (gamma_ + 1.0) / gamma_);
    }
    case Family::SymmetricExpPower:
      return density(quantile(u));
    case Family::SuperHeavyLog: {
      if (u < u0_) return u0_ / x0_;
      const double w = complement(u);
      return w * w * std::exp(-C_ / w) / C_;
    }
    case Family::Custom:
      if (closures_->density_at_quantile) return closures_->density_at_quantile(u);
      return density(quantile(u));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DistributionModel::quantile_log_deriv(double u) const {
  u = clamp_unit(u, "quantile_log_deriv");
  switch (family_) {
    case Family::Uniform01:
      return 1.0 / u;
    case Family::Gumbel: {
      const double L = neg_log(u);
      return -1.0 / (u * L * std::log(L));
    }
    case Family::ExpPowerTail: {
      const double L = neg_log1m(u);
      return 1.0 / (gamma_ * complement(u) * L);
    }
    case Family::WeibullFrechet: {
      const double M = neg_log(u);
      return 1.0 / (gamma_ * u * M);
    }
    case Family::SymmetricExpPower: {
      const double x = quantile(u);
      return 1.0 / (density_at_quantile(u) * x);
    }
    case Family::SuperHeavyLog: {
      if (u < u0_) return 1.0 / u;
      const double w = complement(u);
      return C_ / (w * w);
    }
    case Family::Custom: {
      if (closures_->quantile_log_deriv) return closures_->quantile_log_deriv(u);
      const double h = 1e-7 * std::min(u, 1.0 - u);
      return (log_abs_quantile(u + h) - log_abs_quantile(u - h)) / (2.0 * h);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DistributionModel::density_at_quantile_log_deriv(double u) const {
  u = clamp_unit(u, "density_at_quantile_log_deriv");
  switch (family_) {
    case Family::Uniform01:
      return 0.0;
    case Family::Gumbel: {
      const double L = neg_log(u);
      return (L - 1.0) / (u * L);
    }
    case Family::ExpPowerTail: {
      const double L = neg_log1m(u);
      return (-1.0 + (gamma_ - 1.0) / (gamma_ * L)) / complement(u);
    }
    case Family::WeibullFrechet: {
      const double M = neg_log(u);
      return (1.0 - (gamma_ + 1.0) / (gamma_ * M)) / u;
    }
    case Family::SymmetricExpPower:
      return density_log_deriv(quantile(u)) / density_at_quantile(u);
    case Family::SuperHeavyLog: {
      if (u < u0_) return 0.0;
      const double w = complement(u);
      return -2.0 / w - C_ / (w * w);
    }
    case Family::Custom: {
      if (closures_->density_at_quantile_log_deriv) {
        return closures_->density_at_quantile_log_deriv(u);
      }
      const double h = 1e-7 * std::min(u, 1.0 - u);
      return (std::log(density_at_quantile(u + h)) - std::log(density_at_quantile(u - h))) /
             (2.0 * h);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DistributionModel::log_abs_quantile(double u) const {
  u = clamp_unit(u, "log_abs_quantile");
  switch (family_) {
    case Family::Gumbel:
      return std::log(std::abs(std::log(neg_log(u))));
    case Family::ExpPowerTail:
      return std::log(neg_log1m(u)) / gamma_;
    case Family::WeibullFrechet:
      return -std::log(neg_log(u)) / gamma_;
    case Family::SuperHeavyLog:
      if (u >= u0_) return C_ / complement(u);
      return std::log(x0_ * u / u0_);
    default:
      return std::log(std::abs(quantile(u)));
  }
}

double DistributionModel::log_density_at_quantile(double u) const {
  u = clamp_unit(u, "log_density_at_quantile");
  switch (family_) {
    case Family::Uniform01:
      return 0.0;
    case Family::Gumbel:
      return std::log(u) + std::log(neg_log(u));
    case Family::ExpPowerTail: {
      const double L = neg_log1m(u);
      return std::log(gamma_) - L + (gamma_ - 1.0) / gamma_ * std::log(L);
    }
    case Family::WeibullFrechet: {
      const double M = neg_log(u);
      return std::log(gamma_) - M + (gamma_ + 1.0) / gamma_ * std::log(M);
    }
    case Family::SuperHeavyLog: {
      if (u < u0_) return std::log(u0_ / x0_);
      const double w = complement(u);
      return 2.0 * std::log(w) - C_ / w - std::log(C_);
    }
    default:
      return std::log(density_at_quantile(u));
  }
}

int DistributionModel::quantile_sign(double u) const {
  u = clamp_unit(u, "quantile_sign");
  switch (family_) {
    case Family::Uniform01:
    case Family::ExpPowerTail:
    case Family::WeibullFrechet:
    case Family::SuperHeavyLog:
      return 1;
    case Family::Gumbel: {
      const double e1 = std::exp(-1.0);
      return u > e1 ? 1 : (u < e1 ? -1 : 0);
    }
    case Family::SymmetricExpPower:
      return sign_of(2.0 * u - 1.0);
    case Family::Custom:
      return sign_of(quantile(u));
  }
  return 0;
}

double DistributionModel::density_log_deriv(double x) const {
  switch (family_) {
    case Family::Uniform01:
      return 0.0;
    case Family::Gumbel:
      return std::exp(-x) - 1.0;
    case Family::ExpPowerTail:
      return (gamma_ - 1.0) / x - gamma_ * std::pow(x, gamma_ - 1.0);
    case Family::WeibullFrechet:
      return -(gamma_ + 1.0) / x + gamma_ * std::pow(x, -gamma_ - 1.0);
    case Family::SymmetricExpPower: {
      if (x == 0.0) return 0.0;
      const double s = x > 0.0 ? 1.0 : -1.0;
      return -gamma_ * s * std::pow(std::abs(x), gamma_ - 1.0);
    }
    case Family::SuperHeavyLog: {
      if (x < x0_) return 0.0;
      return -(1.0 + 2.0 / std::log(x)) / x;
    }
    case Family::Custom: {
      const double h = 1e-6 * (1.0 + std::abs(x));
      const double fa = density(x - h), fb = density(x + h);
      if (!(fa > 0.0) || !(fb > 0.0)) {
        throw singularity_error("density_log_deriv: density vanishes near x");
      }
      return (std::log(fb) - std::log(fa)) / (2.0 * h);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace bkq
