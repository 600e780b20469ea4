#include "dfdr/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace dfdr {

using nlohmann::json;

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

json epsilon_json(const Epsilon& eps) {
  if (eps.is_shared()) return eps.weights().front();
  const auto& w = eps.weights();
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  return json{{"min", *lo}, {"mean", eps.mean()}, {"max", *hi}};
}

json to_json(const Pi0Estimate& e) {
  json j{{"method", to_string(e.method)}, {"raw", e.raw}, {"value", e.value}};
  j["lambda"] = e.lambda ? json(*e.lambda) : json(nullptr);
  j["epsilon"] = e.epsilon ? epsilon_json(*e.epsilon) : json(nullptr);
  return j;
}

json to_json(const ThresholdResult& r) {
  json j{{"method", r.method},
         {"pi0", r.pi0},
         {"alpha", r.alpha},
         {"t_alpha", r.t_alpha},
         {"rejections", r.rejections}};
  j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
  j["epsilon"] = r.epsilon ? epsilon_json(*r.epsilon) : json(nullptr);
  j["fdr_at_t"] = r.fdr_at_t ? json(*r.fdr_at_t) : json(nullptr);
  return j;
}

json to_json(const TuningResult& r) {
  json table = json::array();
  for (std::size_t g = 0; g < r.points.size(); ++g) {
    table.push_back({{"lambda", r.points[g].lambda},
                     {"epsilon", r.points[g].epsilon},
                     {"full_sample", r.full_sample[g]},
                     {"mse", r.mse[g]}});
  }
  return json{{"chosen", {{"lambda", r.chosen.lambda}, {"epsilon", r.chosen.epsilon}}},
              {"estimate", to_json(r.estimate)},
              {"target", r.target},
              {"mse", table}};
}

json to_json(const ScenarioSpec& s) {
  json methods = json::array();
  for (auto m : s.methods) methods.push_back(to_string(m));
  json j{{"kind", to_string(s.kind)},
         {"m", s.m},
         {"pi0", s.pi0},
         {"alpha", s.alphas},
         {"reps", s.reps},
         {"seed", s.seed},
         {"lambda", s.lambda},
         {"epsilon", s.epsilon},
         {"methods", methods},
         {"convention", to_string(s.convention)}};
  switch (s.kind) {
    case ScenarioKind::poisson_bin:
      j["theta_location"] = s.theta_location;
      j["theta_shape"] = s.theta_shape;
      j["rho_min"] = s.rho_min;
      j["rho_max"] = s.rho_max;
      break;
    case ScenarioKind::binomial_fet:
      j["theta_min"] = s.theta_min;
      j["theta_max"] = s.theta_max;
      j["rho_min"] = s.rho_min;
      j["rho_max"] = s.rho_max;
      j["trials_size"] = s.trials_size;
      j["trials_mean"] = s.trials_mean;
      j["trials_offset"] = s.trials_offset;
      j["theta2_rule"] = to_string(s.theta2_rule);
      j["theta2_cap"] = s.theta2_cap;
      break;
    case ScenarioKind::negbinom_ent:
      if (s.theta1_values.empty()) {
        j["theta_min"] = s.theta_min;
        j["theta_max"] = s.theta_max;
      } else {
        j["theta1_count"] = s.theta1_values.size();
      }
      j["rho_location"] = s.rho_location;
      j["rho_shape"] = s.rho_shape;
      j["dispersion"] = s.dispersion;
      j["reps_per_group"] = s.reps_per_group;
      break;
  }
  if (s.rho_fixed) j["rho_fixed"] = *s.rho_fixed;
  return j;
}

namespace {

json moments_json(const Moments& mo, bool sd_defined) {
  json j{{"mean", mo.mean}, {"n", mo.n}};
  j["sd"] = mo.sd;
  j["se"] = mo.se;
  if (!sd_defined) j["sd_defined"] = false;
  return j;
}

}  // namespace

json aggregate_json(const ReplicationSummary& s) {
  json methods = json::object();
  for (Method method : s.spec.methods) {
    json jm{{"excess", moments_json(moments_of(s.excess(method)), s.sd_defined)}};
    json by_alpha = json::array();
    for (double alpha : s.spec.alphas) {
      by_alpha.push_back(
          {{"alpha", alpha},
           {"rejections", moments_json(moments_of(s.rejections(method, alpha)), s.sd_defined)},
           {"threshold", moments_json(moments_of(s.thresholds(method, alpha)), s.sd_defined)},
           {"fdp", moments_json(moments_of(s.fdp(method, alpha)), s.sd_defined)}});
    }
    jm["by_alpha"] = by_alpha;
    methods[std::string(to_string(method))] = jm;
  }
  return json{{"scenario", to_json(s.spec)},
              {"replications", s.records.size()},
              {"sd_defined", s.sd_defined},
              {"methods", methods}};
}

void write_replications_csv(std::ostream& out, const ReplicationSummary& s) {
  out << "rep,method,alpha,pi0,excess,threshold,rejections,false_discoveries,fdp\n";
  for (const auto& rec : s.records) {
    for (const auto& mo : rec.methods) {
      for (const auto& po : mo.by_alpha) {
        out << rec.rep << ',' << to_string(mo.method) << ','
            << format_number(po.alpha) << ',' << format_number(mo.pi0) << ','
            << format_number(mo.pi0 - rec.true_pi0) << ','
            << format_number(po.threshold) << ',' << po.rejections << ','
            << po.false_discoveries << ',' << format_number(po.fdp) << '\n';
      }
    }
  }
}

}  // namespace dfdr
