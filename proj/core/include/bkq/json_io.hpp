#ifndef BKQ_JSON_IO_HPP
#define BKQ_JSON_IO_HPP

#include <span>
#include <string>

#include <json.hpp>

#include "bkq/conditions.hpp"
#include "bkq/experiment.hpp"

namespace bkq {

using json = nlohmann::ordered_json;

// Descriptors. Families and functional forms are constructible from small
// JSON objects, e.g. {"family": "gumbel"} and {"form": "power_int", "k": 0}.
// Closures cannot cross the JSON boundary, so Custom models (other than the
// shipped pareto_left) and Custom functionals are rejected.
DistributionModel model_from_json(const json& j);
json model_to_json(const DistributionModel& model);

SmoothFunctional functional_from_json(const json& j);
json functional_to_json(const SmoothFunctional& f);

QuantileSchedule schedule_from_json(const json& j);
json schedule_to_json(const QuantileSchedule& schedule);

LogMode log_mode_from_string(const std::string& s);
std::string log_mode_name(LogMode mode);

ExperimentConfig config_from_json(const json& j);
// Canonical echo of the effective configuration. Thread count is omitted:
// it must not influence any serialized output.
json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::string& path);

json rate_fit_to_json(const RateFit& fit);
json report_to_json(const ExperimentReport& report, const ExperimentConfig& config);
json condition_report_to_json(const ConditionReport& report);

// Flat CSV of replication rows; fixed column order
// n,k_n,p_n,r_n,xi,xi_hat,R1,R2,lhs2,delta1,delta1_hat,delta2,delta2_hat,psi_value,seed_path
std::string samples_to_csv(std::span<const RemainderSample> samples);

// Closed-form evaluations, boundary limits and condition verdicts for the
// five worked distribution families (the `examples` subcommand payload).
json worked_examples_report();

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace bkq

#endif  // BKQ_JSON_IO_HPP
