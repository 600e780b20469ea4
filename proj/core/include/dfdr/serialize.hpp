#pragma once

// JSON and CSV renderings of results. Floating-point values in text output
// use 9 significant digits.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "dfdr/estimators.hpp"
#include "dfdr/fdr.hpp"
#include "dfdr/sim.hpp"
#include "dfdr/tuning.hpp"

namespace dfdr {

// printf("%.9g")
std::string format_number(double x);

// Epsilon as a scalar when shared, otherwise {"min", "mean", "max"}.
nlohmann::json epsilon_json(const Epsilon& eps);

// {method, raw, value, lambda, epsilon}
nlohmann::json to_json(const Pi0Estimate& e);

// {method, lambda, epsilon, pi0, alpha, t_alpha, fdr_at_t, rejections}
nlohmann::json to_json(const ThresholdResult& r);

// {chosen, estimate, target, mse: [{lambda, epsilon, full_sample, mse}]}
nlohmann::json to_json(const TuningResult& r);

nlohmann::json to_json(const ScenarioSpec& spec);

// Aggregate means / sds per method and alpha.
nlohmann::json aggregate_json(const ReplicationSummary& s);

// Tidy CSV: one row per replication x method x alpha.
void write_replications_csv(std::ostream& out, const ReplicationSummary& s);

}  // namespace dfdr
