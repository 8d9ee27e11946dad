#ifndef BKQ_SCHEDULE_HPP
#define BKQ_SCHEDULE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bkq {

enum class ScheduleSide { Left, Right };
enum class ScheduleRule { FixedFraction, Power, LogPower, Explicit };

// Rule producing the order-statistic index k_n from the sample size n.
// Left-side rules push p_n = k_n/n to 0, right-side rules to 1. Every
// evaluation enforces 1 <= k_n <= n-1 and throws schedule_error otherwise.
class QuantileSchedule {
 public:
  static QuantileSchedule fixed_fraction(double alpha);
  static QuantileSchedule power(double beta, ScheduleSide side);
  static QuantileSchedule log_power(double q, ScheduleSide side);
  static QuantileSchedule explicit_table(std::vector<std::pair<std::uint64_t, std::uint64_t>> nk);

  std::uint64_t k(std::uint64_t n) const;
  // r_n = min(k_n, n - k_n), the effective depth driving the rates.
  std::uint64_t depth(std::uint64_t n) const;
  double fraction(std::uint64_t n) const;  // p_n = k_n / n

  // Declared limit regime (a1, a2) = (liminf p_n, limsup p_n).
  std::pair<double, double> regime() const { return regime_; }
  ScheduleRule rule() const { return rule_; }
  ScheduleSide side() const { return side_; }
  std::string describe() const;

  double param_alpha() const { return alpha_; }
  double param_beta() const { return beta_; }
  double param_q() const { return q_; }
  const std::map<std::uint64_t, std::uint64_t>& table() const { return table_; }

 private:
  QuantileSchedule() = default;

  ScheduleRule rule_ = ScheduleRule::FixedFraction;
  ScheduleSide side_ = ScheduleSide::Left;
  double alpha_ = 0.5;
  double beta_ = 0.0;
  double q_ = 0.0;
  std::pair<double, double> regime_{0.5, 0.5};
  std::map<std::uint64_t, std::uint64_t> table_;
};

}  // namespace bkq

#endif  // BKQ_SCHEDULE_HPP
