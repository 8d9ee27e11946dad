#ifndef BKQ_CONDITIONS_HPP
#define BKQ_CONDITIONS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bkq/functional.hpp"
#include "bkq/remainder.hpp"
#include "bkq/schedule.hpp"

namespace bkq {

// Finite-grid verdict for an asymptotic claim. Limits cannot be certified in
// finite arithmetic, so decisions use decay/boundedness heuristics and fall
// back to Inconclusive whenever those disagree.
enum class Verdict { Holds, Fails, Inconclusive };

std::string verdict_name(Verdict v);

struct ConditionReport {
  std::string condition_id;
  std::vector<double> grid;    // abscissae (n or x values)
  std::vector<double> values;  // observed sequence
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> witness;  // grid point of max violation; set when Fails
};

// log n / r_n -> 0 along the grid. Holds when the sequence decays past a
// factor 10 and keeps decreasing on the tail half of the grid.
ConditionReport check_log_over_depth(const QuantileSchedule& schedule,
                                     std::span<const std::uint64_t> n_grid);

// The scaled logarithmic slope v'(u) [u ^ (1-u)] / v(u) (signed); its
// boundedness over U is the first sufficient condition for absorbing the
// psi term into the single-term bound.
double scaled_v_slope(const RatioFunction& ratio, double u);

// v(u + [u ^ (1-u)] o1) / v(u); stays finite through log-space evaluation
// even for super-heavy tails. Returns exactly 1 for o1 = 0.
double v_perturbation_ratio(const RatioFunction& ratio, double u, double o1);

// psi / [ (log(.)/r_n)^{1/4} |g/f|(xi) ] along the grid; Holds when bounded.
ConditionReport check_psi_absorption(const DistributionModel& model, const SmoothFunctional& G,
                                     const QuantileSchedule& schedule,
                                     std::span<const std::uint64_t> n_grid, double C,
                                     LogMode log_mode, std::size_t psi_grid_points = 2001);

// Second-order increment regularity on a tail grid:
//   |f(x + dx) - f(x)| / ( |f(x)| |dx/x|^{1/2} )  stays bounded.
// The default rule pushes dx = sgn(x) |x|^0.6 deeper into the tail.
ConditionReport check_increment_regularity(const std::function<double(double)>& f,
                                           std::span<const double> x_grid,
                                           const std::function<double(double)>& dx_rule = {});

// Super-heavy-tail admissibility: n^{2/3} (log r_n)^{1/3} / r_n -> 0.
ConditionReport check_heavy_tail_schedule(const QuantileSchedule& schedule,
                                          std::span<const std::uint64_t> n_grid);

// |scaled_v_slope| along a u-grid ordered toward the boundary; Holds when
// it stays bounded (the first smoothness condition on v).
ConditionReport check_slope_bounded(const RatioFunction& ratio, std::span<const double> u_grid);

// |v(u + m o1)/v(u)| along paired (u_j, o1_j) sequences with o1_j -> 0;
// Holds when the ratios stay bounded (the second condition on v).
ConditionReport check_perturbation_bounded(const RatioFunction& ratio,
                                           std::span<const double> u_grid,
                                           std::span<const double> o1_seq);

// Independently coded two-term displays of the scaled slope for the worked
// families; used to cross-check the generic route.
struct SlopeTerms {
  double term1 = 0.0;
  double term2 = 0.0;
  double total() const { return term1 + term2; }
};

SlopeTerms gumbel_slope_terms(double u, int k);
SlopeTerms exp_power_slope_terms(double u, double rho, double gamma);
SlopeTerms frechet_slope_terms(double u, double rho, double gamma);
// Scaled slope C(rho+1)/(1-u) + 2 of the logarithmic-tail family (diverges
// as u -> 1), and the exact perturbation ratio for the same family.
double heavy_log_slope_closed(double u, double rho, double C);
double heavy_log_perturbation_closed(double u, double o1, double rho, double C);

}  // namespace bkq

#endif  // BKQ_CONDITIONS_HPP
