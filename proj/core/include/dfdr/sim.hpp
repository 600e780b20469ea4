#pragma once

// Simulation harness: count generators for three discrete-data scenarios,
// a seeded replication runner, and exact bias oracles by enumeration.
//
//   poisson_bin    theta1 ~ Pareto(7, 7), rho ~ U(1.5, 5), Poisson counts,
//                  conditional binomial test
//   binomial_fet   r = NB(3, mean 8) + 2, theta1 ~ U(0.08, 0.65),
//                  rho ~ U(1.5, 13), Binomial counts, Fisher's exact test
//   negbinom_ent   theta1 from a file or U(theta_min, theta_max),
//                  rho ~ Pareto(1.5, 1.426), dispersion 1.451, 3 samples per
//                  group, exact NB test
//
// Hypotheses 1..m0 (m0 = round(pi0 m)) are true nulls with theta2 = theta1;
// the rest get theta2 from rho and theta1.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfdr/discrete_tests.hpp"
#include "dfdr/estimators.hpp"
#include "dfdr/fdr.hpp"

namespace dfdr {

enum class ScenarioKind { poisson_bin, binomial_fet, negbinom_ent };

ScenarioKind parse_scenario_kind(std::string_view name);
std::string_view to_string(ScenarioKind kind);

// How the binomial scenario maps rho * theta1 / (1 - theta1) to a success
// probability for the false nulls.
enum class Theta2Rule {
  odds,  // treat it as odds: theta2 = o / (1 + o)
  cap,   // use it directly, capped at theta2_cap
};

Theta2Rule parse_theta2_rule(std::string_view name);
std::string_view to_string(Theta2Rule rule);

// Roster entries: a pi0 estimate paired with a thresholding procedure.
enum class Method {
  generalized,   // pi0G(lambda, eps) with min[1, pi0G t m / (R v 1)]
  storey,        // pi0S(lambda) with pi0S t m / (R v 1)
  pounds_tilde,  // min(1, 2 pbar) plugged into the clipped Storey-type estimator
  pounds_hat,    // min(1, mean p / E0[p]) plugged in likewise
  bh,            // BH, pi0 = 1
  adaptive_bh,   // BH at alpha / pi0B (median-based pi0B)
};

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::poisson_bin;
  std::size_t m = 1000;
  double pi0 = 0.8;
  std::vector<double> alphas{0.025, 0.05, 0.075, 0.1};
  std::size_t reps = 50;
  std::uint64_t seed = 20130901;
  unsigned threads = 1;
  double lambda = 0.5;
  double epsilon = 1.0;
  std::vector<Method> methods{Method::generalized, Method::storey,
                              Method::pounds_tilde, Method::bh,
                              Method::adaptive_bh};
  PValueConvention convention = PValueConvention::minimum_likelihood;

  // theta1: Pareto(location, shape) for poisson_bin, U(min, max) otherwise.
  double theta_location = 7.0;
  double theta_shape = 7.0;
  double theta_min = 0.08;
  double theta_max = 0.65;
  std::vector<double> theta1_values;  // negbinom_ent: cycled if non-empty

  // rho: U(min, max) for poisson_bin and binomial_fet, Pareto otherwise.
  double rho_min = 1.5;
  double rho_max = 5.0;
  double rho_location = 1.5;
  double rho_shape = 1.426;
  std::optional<double> rho_fixed;  // overrides the rho draw when set

  // binomial_fet
  double trials_size = 3.0;
  double trials_mean = 8.0;
  std::int64_t trials_offset = 2;
  Theta2Rule theta2_rule = Theta2Rule::odds;
  double theta2_cap = 1.0;

  // negbinom_ent
  double dispersion = 1.451;  // phi = 1 / size
  int reps_per_group = 3;

  // Defaults for a scenario kind.
  static ScenarioSpec defaults(ScenarioKind kind);

  std::size_t null_count() const;
  // Throws ConfigError on an invalid combination.
  void validate() const;
};

// Per-hypothesis parameters of one replication.
struct ScenarioParameters {
  std::vector<double> theta1;
  std::vector<double> theta2;
  std::vector<std::int64_t> trials;  // binomial_fet only
  std::vector<bool> truth;           // true null?
};

ScenarioParameters draw_parameters(const ScenarioSpec& spec, std::size_t rep);

// Draws counts for fixed parameters and runs the scenario's test.
Study simulate_study(const ScenarioSpec& spec, const ScenarioParameters& params,
                     std::size_t rep);

// draw_parameters + simulate_study for replication `rep`.
Study generate_scenario(const ScenarioSpec& spec, std::size_t rep);

struct ProcedureOutcome {
  double alpha = 0.0;
  double threshold = 0.0;
  std::size_t rejections = 0;        // R
  std::size_t false_discoveries = 0; // V
  std::size_t true_discoveries = 0;  // S
  double fdp = 1.0;                  // V / R, or 1 when R = 0
};

struct MethodOutcome {
  Method method;
  double pi0 = 1.0;
  std::vector<ProcedureOutcome> by_alpha;  // spec.alphas order
};

struct ReplicationRecord {
  std::size_t rep = 0;
  double true_pi0 = 0.0;
  std::vector<MethodOutcome> methods;  // spec.methods order
};

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 when n < 2
  double se = 0.0;
  std::size_t n = 0;
};

Moments moments_of(const std::vector<double>& xs);

struct ReplicationSummary {
  ScenarioSpec spec;
  std::vector<ReplicationRecord> records;  // rep order
  bool sd_defined = false;                 // reps >= 2

  // Samples across replications.
  std::vector<double> excess(Method method) const;
  std::vector<double> fdp(Method method, double alpha) const;
  std::vector<double> rejections(Method method, double alpha) const;
  std::vector<double> thresholds(Method method, double alpha) const;
};

ReplicationRecord run_replication(const ScenarioSpec& spec, std::size_t rep);
ReplicationSummary run_replications(const ScenarioSpec& spec);

// Exact per-hypothesis quantities for the bias oracles.
struct HypothesisMoments {
  double cdf_at_lambda = 0.0;       // F_i(lambda) = P(p_i <= lambda)
  double null_cdf_at_lambda = 0.0;  // E[F_i*(lambda)] = E[t_{i,lambda}]
  double mean_pvalue = 0.0;         // E[p_i]
  double mass = 1.0;                // enumerated probability mass
};

struct BiasDecomposition {
  double lambda = 0.5;
  double epsilon = 1.0;
  double pi0 = 0.0;
  double bias_generalized = 0.0;   // b^G(eps)
  double bias_pounds = 0.0;        // b^P
  double pounds_null_term = 0.0;   // (2/m) sum_{I0} (E p - 1/2)
  double pounds_alt_term = 0.0;    // (2/m) sum_{I1} E p
  double max_mass_deficit = 0.0;
  std::vector<HypothesisMoments> hypotheses;
};

// b^G(eps) = (1 - eps lambda)/(1 - lambda)
//            - sum_i {F_i(lambda) - eps F_i*(lambda)} / ((1 - lambda) m) - pi0
// b^P      = (2/m) sum_{I0} (E p_i - 1/2) + (2/m) sum_{I1} E p_i
BiasDecomposition bias_from_moments(std::vector<HypothesisMoments> hypotheses,
                                    const std::vector<bool>& truth,
                                    double lambda, double epsilon);

// Enumerates every hypothesis' outcome law (totals up to `truncation` where
// the law is unbounded) for the parameters of replication `rep`. Throws
// DomainError if more than 1e-6 probability mass is left unaccounted.
BiasDecomposition bias_decomposition(const ScenarioSpec& spec, double lambda,
                                     double epsilon, std::size_t truncation,
                                     std::size_t rep = 0);

}  // namespace dfdr
