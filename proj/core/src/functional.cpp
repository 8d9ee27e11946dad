#include "bkq/functional.hpp"

#include <cmath>

#include "bkq/errors.hpp"

namespace bkq {

SmoothFunctional SmoothFunctional::identity() {
  SmoothFunctional f;
  f.form_ = GForm::Identity;
  f.label_ = "identity";
  return f;
}

SmoothFunctional SmoothFunctional::power_int(int k) {
  SmoothFunctional f;
  f.form_ = GForm::PowerInt;
  f.k_ = k;
  f.rho_ = static_cast<double>(k);
  f.label_ = "power_int(" + std::to_string(k) + ")";
  return f;
}

SmoothFunctional SmoothFunctional::power_abs(double rho, int sign) {
  if (sign != 1 && sign != -1) throw config_error("power_abs: sign must be +1 or -1");
  SmoothFunctional f;
  f.form_ = GForm::PowerAbs;
  f.rho_ = rho;
  f.sign_ = sign;
  f.label_ = "power_abs(" + std::to_string(rho) + ")";
  return f;
}

SmoothFunctional SmoothFunctional::custom(std::function<double(double)> G,
                                          std::function<double(double)> g,
                                          std::function<double(double)> g_prime,
                                          std::string label) {
  if (!G || !g) throw config_error("custom functional requires G and g closures");
  SmoothFunctional f;
  f.form_ = GForm::Custom;
  f.label_ = std::move(label);
  f.closures_ = std::make_shared<const Closures>(
      Closures{std::move(G), std::move(g), std::move(g_prime)});
  return f;
}

double SmoothFunctional::value(double x) const {
  switch (form_) {
    case GForm::Identity:
      return x;
    case GForm::PowerInt:
      if (k_ == -1) return std::log(std::abs(x));
      return std::pow(x, k_ + 1) / (k_ + 1);
    case GForm::PowerAbs: {
      const double s = x >= 0.0 ? 1.0 : -1.0;
      if (rho_ == -1.0) return sign_ * s * std::log(std::abs(x));
      return sign_ * s * std::pow(std::abs(x), rho_ + 1.0) / (rho_ + 1.0);
    }
    case GForm::Custom:
      return closures_->G(x);
  }
  return 0.0;
}

double SmoothFunctional::deriv(double x) const {
  switch (form_) {
    case GForm::Identity:
      return 1.0;
    case GForm::PowerInt:
      return std::pow(x, k_);
    case GForm::PowerAbs:
      return sign_ * std::pow(std::abs(x), rho_);
    case GForm::Custom:
      return closures_->g(x);
  }
  return 0.0;
}

double SmoothFunctional::deriv2(double x) const {
  switch (form_) {
    case GForm::Identity:
      return 0.0;
    case GForm::PowerInt:
      return k_ == 0 ? 0.0 : k_ * std::pow(x, k_ - 1);
    case GForm::PowerAbs: {
      if (rho_ == 0.0) return 0.0;
      const double s = x >= 0.0 ? 1.0 : -1.0;
      return sign_ * rho_ * s * std::pow(std::abs(x), rho_ - 1.0);
    }
    case GForm::Custom: {
      if (closures_->g_prime) return closures_->g_prime(x);
      const double h = 1e-6 * (1.0 + std::abs(x));
      return (closures_->g(x + h) - closures_->g(x - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

RatioFunction::RatioFunction(DistributionModel model, SmoothFunctional functional)
    : model_(std::move(model)), functional_(std::move(functional)) {}

double RatioFunction::v(double u) const {
  const double fq = model_.density_at_quantile(u);
  if (!(fq > 0.0)) {
    throw singularity_error("v: density vanishes at F^-1(" + std::to_string(u) + ")");
  }
  return functional_.deriv(model_.quantile(u)) / fq;
}

double RatioFunction::log_slope(double u) const {
  if (functional_.is_power()) {
    const double rho = functional_.power_exponent();
    const double tail = model_.density_at_quantile_log_deriv(u);
    if (rho == 0.0) return -tail;  // g constant: only the density term moves
    return rho * model_.quantile_log_deriv(u) - tail;
  }
  const double x = model_.quantile(u);
  const double g = functional_.deriv(x);
  if (g == 0.0) throw singularity_error("log_slope: g vanishes at F^-1(u)");
  const double fq = model_.density_at_quantile(u);
  if (!(fq > 0.0)) throw singularity_error("log_slope: density vanishes at F^-1(u)");
  return functional_.deriv2(x) / g / fq - model_.density_at_quantile_log_deriv(u);
}

double RatioFunction::v_prime(double u) const {
  if (functional_.is_power()) return v(u) * log_slope(u);
  const double h = 1e-7 * std::min(u, 1.0 - u);
  return (v(u + h) - v(u - h)) / (2.0 * h);
}

double RatioFunction::log_abs_v(double u) const {
  if (functional_.is_power()) {
    const double rho = functional_.power_exponent();
    const double head = rho == 0.0 ? 0.0 : rho * model_.log_abs_quantile(u);
    return head - model_.log_density_at_quantile(u);
  }
  const double g = functional_.deriv(model_.quantile(u));
  return std::log(std::abs(g)) - model_.log_density_at_quantile(u);
}

int RatioFunction::sign_v(double u) const {
  const int s = model_.quantile_sign(u);
  switch (functional_.form()) {
    case GForm::Identity:
      return 1;
    case GForm::PowerInt:
      if (functional_.param_k() == 0) return 1;
      if (s == 0) return functional_.param_k() > 0 ? 0 : 1;
      return functional_.param_k() % 2 == 0 ? 1 : s;
    case GForm::PowerAbs:
      if (s == 0 && functional_.param_rho() > 0.0) return 0;
      return functional_.param_sign();
    case GForm::Custom: {
      const double g = functional_.deriv(model_.quantile(u));
      return g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
    }
  }
  return 0;
}

}  // namespace bkq
