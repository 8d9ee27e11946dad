#include "bkq/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "bkq/errors.hpp"

namespace bkq {

namespace {

std::uint64_t ceil_of(double x) {
  return static_cast<std::uint64_t>(std::ceil(x - 1e-12));
}

}  // namespace

QuantileSchedule QuantileSchedule::fixed_fraction(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw schedule_error("fixed_fraction: alpha must be in (0,1)");
  }
  QuantileSchedule s;
  s.rule_ = ScheduleRule::FixedFraction;
  s.alpha_ = alpha;
  s.side_ = alpha <= 0.5 ? ScheduleSide::Left : ScheduleSide::Right;
  s.regime_ = {alpha, alpha};
  return s;
}

QuantileSchedule QuantileSchedule::power(double beta, ScheduleSide side) {
  if (!(beta > 0.0 && beta < 1.0)) throw schedule_error("power: beta must be in (0,1)");
  QuantileSchedule s;
  s.rule_ = ScheduleRule::Power;
  s.beta_ = beta;
  s.side_ = side;
  s.regime_ = side == ScheduleSide::Left ? std::pair{0.0, 0.0} : std::pair{1.0, 1.0};
  return s;
}

QuantileSchedule QuantileSchedule::log_power(double q, ScheduleSide side) {
  if (!(q > 0.0)) throw schedule_error("log_power: q must be > 0");
  QuantileSchedule s;
  s.rule_ = ScheduleRule::LogPower;
  s.q_ = q;
  s.side_ = side;
  s.regime_ = side == ScheduleSide::Left ? std::pair{0.0, 0.0} : std::pair{1.0, 1.0};
  return s;
}

QuantileSchedule QuantileSchedule::explicit_table(
    std::vector<std::pair<std::uint64_t, std::uint64_t>> nk) {
  if (nk.empty()) throw schedule_error("explicit_table: empty table");
  QuantileSchedule s;
  s.rule_ = ScheduleRule::Explicit;
  double lo = 1.0, hi = 0.0;
  for (const auto& [n, k] : nk) {
    if (n < 2 || k < 1 || k > n - 1) {
      throw schedule_error("explicit_table: needs 1 <= k <= n-1 at n=" + std::to_string(n));
    }
    s.table_[n] = k;
    const double p = static_cast<double>(k) / static_cast<double>(n);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  s.regime_ = {lo, hi};
  s.side_ = hi <= 0.5 ? ScheduleSide::Left : ScheduleSide::Right;
  return s;
}

std::uint64_t QuantileSchedule::k(std::uint64_t n) const {
  if (n < 2) throw schedule_error("schedule: n must be >= 2");
  std::uint64_t k = 0;
  switch (rule_) {
    case ScheduleRule::FixedFraction:
      k = ceil_of(alpha_ * static_cast<double>(n));
      break;
    case ScheduleRule::Power: {
      const std::uint64_t m = ceil_of(std::pow(static_cast<double>(n), beta_));
      k = side_ == ScheduleSide::Left ? m : n - m;
      break;
    }
    case ScheduleRule::LogPower: {
      const std::uint64_t m = ceil_of(std::pow(std::log(static_cast<double>(n)), q_));
      k = side_ == ScheduleSide::Left ? m : n - m;
      break;
    }
    case ScheduleRule::Explicit: {
      const auto it = table_.find(n);
      if (it == table_.end()) {
        throw schedule_error("explicit schedule has no entry for n=" + std::to_string(n));
      }
      k = it->second;
      break;
    }
  }
  if (k < 1 || k > n - 1) {
    throw schedule_error("schedule produced k=" + std::to_string(k) +
                         " outside [1, n-1] at n=" + std::to_string(n));
  }
  return k;
}

std::uint64_t QuantileSchedule::depth(std::uint64_t n) const {
  const std::uint64_t kn = k(n);
  return std::min(kn, n - kn);
}

double QuantileSchedule::fraction(std::uint64_t n) const {
  return static_cast<double>(k(n)) / static_cast<double>(n);
}

std::string QuantileSchedule::describe() const {
  switch (rule_) {
    case ScheduleRule::FixedFraction:
      return "fixed_fraction(" + std::to_string(alpha_) + ")";
    case ScheduleRule::Power:
      return "power(" + std::to_string(beta_) + "," +
             (side_ == ScheduleSide::Left ? "left)" : "right)");
    case ScheduleRule::LogPower:
      return "log_power(" + std::to_string(q_) + "," +
             (side_ == ScheduleSide::Left ? "left)" : "right)");
    case ScheduleRule::Explicit:
      return "explicit(" + std::to_string(table_.size()) + " entries)";
  }
  return "schedule";
}

}  // namespace bkq
