#ifndef BKQ_FUNCTIONAL_HPP
#define BKQ_FUNCTIONAL_HPP

#include <functional>
#include <memory>
#include <string>

#include "bkq/distribution.hpp"

namespace bkq {

enum class GForm { Identity, PowerInt, PowerAbs, Custom };

// Smooth transform G applied to the quantile, together with its derivative
// g = G'. The built-in power forms are parameterized by the derivative:
// PowerInt(k) has g(x) = x^k (k integer, so g exists for negative x), and
// PowerAbs(rho, sign) has g(x) = sign*|x|^rho.
class SmoothFunctional {
 public:
  static SmoothFunctional identity();
  static SmoothFunctional power_int(int k);
  static SmoothFunctional power_abs(double rho, int sign);
  static SmoothFunctional custom(std::function<double(double)> G,
                                 std::function<double(double)> g,
                                 std::function<double(double)> g_prime = {},
                                 std::string label = "custom");

  GForm form() const { return form_; }
  const std::string& label() const { return label_; }

  double value(double x) const;   // G(x)
  double deriv(double x) const;   // g(x)
  double deriv2(double x) const;  // g'(x)

  // For the power forms: exponent rho with g(x) = sign * |x|^rho up to the
  // sign conventions of x^k. Drives closed-form ratio derivatives.
  bool is_power() const { return form_ != GForm::Custom; }
  double power_exponent() const { return rho_; }

  int param_k() const { return k_; }
  double param_rho() const { return rho_; }
  int param_sign() const { return sign_; }

 private:
  SmoothFunctional() = default;

  GForm form_ = GForm::Identity;
  std::string label_;
  int k_ = 0;
  double rho_ = 0.0;
  int sign_ = 1;
  struct Closures {
    std::function<double(double)> G, g, g_prime;
  };
  std::shared_ptr<const Closures> closures_;
};

// The ratio function v(u) = (g/f)(F^-1(u)) and its derivative. The slope and
// log-magnitude accessors stay finite even where v itself leaves double
// range (super-heavy tails), by composing per-family closed forms in u.
class RatioFunction {
 public:
  RatioFunction(DistributionModel model, SmoothFunctional functional);

  const DistributionModel& model() const { return model_; }
  const SmoothFunctional& functional() const { return functional_; }

  double v(double u) const;
  double v_prime(double u) const;
  // v'(u)/v(u), evaluated without forming v. Closed-form when both the
  // family and the functional are built-in; central difference otherwise.
  double log_slope(double u) const;
  // log |v(u)| and sign(v(u)).
  double log_abs_v(double u) const;
  int sign_v(double u) const;

 private:
  DistributionModel model_;
  SmoothFunctional functional_;
};

}  // namespace bkq

#endif  // BKQ_FUNCTIONAL_HPP
