#include "dfdr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dfdr/error.hpp"
#include "dfdr/parallel.hpp"
#include "dfdr/rng.hpp"

namespace dfdr {
namespace {

constexpr std::string_view kKindNames = "poisson_bin, binomial_fet, negbinom_ent";

template <typename T>
std::vector<double> collect(const ReplicationSummary& s, Method method,
                            double alpha, T field) {
  std::vector<double> out;
  for (const auto& rec : s.records) {
    for (const auto& mo : rec.methods) {
      if (mo.method != method) continue;
      for (const auto& po : mo.by_alpha) {
        if (po.alpha == alpha) out.push_back(field(po));
      }
    }
  }
  return out;
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "poisson_bin") return ScenarioKind::poisson_bin;
  if (name == "binomial_fet") return ScenarioKind::binomial_fet;
  if (name == "negbinom_ent") return ScenarioKind::negbinom_ent;
  throw ConfigError("unknown scenario kind '" + std::string(name) +
                    "' (valid kinds: " + std::string(kKindNames) + ")");
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::poisson_bin: return "poisson_bin";
    case ScenarioKind::binomial_fet: return "binomial_fet";
    case ScenarioKind::negbinom_ent: return "negbinom_ent";
  }
  return "?";
}

Theta2Rule parse_theta2_rule(std::string_view name) {
  if (name == "odds") return Theta2Rule::odds;
  if (name == "cap") return Theta2Rule::cap;
  throw ConfigError("unknown theta2_rule '" + std::string(name) +
                    "' (valid: odds, cap)");
}

std::string_view to_string(Theta2Rule rule) {
  return rule == Theta2Rule::odds ? "odds" : "cap";
}

Method parse_method(std::string_view name) {
  if (name == "generalized" || name == "new") return Method::generalized;
  if (name == "storey") return Method::storey;
  if (name == "pounds_tilde") return Method::pounds_tilde;
  if (name == "pounds_hat") return Method::pounds_hat;
  if (name == "bh") return Method::bh;
  if (name == "adaptive_bh") return Method::adaptive_bh;
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (valid: generalized, storey, pounds_tilde, pounds_hat, "
                    "bh, adaptive_bh)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::generalized: return "generalized";
    case Method::storey: return "storey";
    case Method::pounds_tilde: return "pounds_tilde";
    case Method::pounds_hat: return "pounds_hat";
    case Method::bh: return "bh";
    case Method::adaptive_bh: return "adaptive_bh";
  }
  return "?";
}

ScenarioSpec ScenarioSpec::defaults(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::poisson_bin:
      s.rho_min = 1.5;
      s.rho_max = 5.0;
      break;
    case ScenarioKind::binomial_fet:
      s.theta_min = 0.08;
      s.theta_max = 0.65;
      s.rho_min = 1.5;
      s.rho_max = 13.0;
      break;
    case ScenarioKind::negbinom_ent:
      s.theta_min = 0.5;
      s.theta_max = 5.0;
      break;
  }
  return s;
}

std::size_t ScenarioSpec::null_count() const {
  return static_cast<std::size_t>(std::llround(pi0 * static_cast<double>(m)));
}

void ScenarioSpec::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (m < 1) fail("m must be >= 1");
  if (!(pi0 > 0.0 && pi0 < 1.0)) fail("pi0 must lie in (0, 1)");
  if (reps < 1) fail("reps must be >= 1");
  if (alphas.empty()) fail("at least one alpha level is required");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) fail("alpha levels must lie in [0, 1]");
  }
  if (!(lambda >= 0.0 && lambda < 1.0)) fail("lambda must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must lie in [0, 1]");
  if (methods.empty()) fail("method roster is empty");
  if (kind == ScenarioKind::poisson_bin &&
      !(theta_location > 0.0 && theta_shape > 0.0)) {
    fail("theta_location and theta_shape must be positive");
  }
  if (kind != ScenarioKind::poisson_bin && theta1_values.empty() &&
      !(theta_min > 0.0 && theta_min <= theta_max)) {
    fail("need 0 < theta_min <= theta_max");
  }
  if (kind == ScenarioKind::binomial_fet && theta_max >= 1.0) {
    fail("binomial_fet needs theta_max < 1");
  }
  if (kind != ScenarioKind::negbinom_ent && !rho_fixed && !(rho_min <= rho_max)) {
    fail("need rho_min <= rho_max");
  }
  if (kind == ScenarioKind::negbinom_ent) {
    if (!(dispersion > 0.0)) fail("dispersion must be positive");
    if (reps_per_group < 1) fail("reps_per_group must be >= 1");
    if (!(rho_location > 0.0 && rho_shape > 0.0)) {
      fail("rho_location and rho_shape must be positive");
    }
  }
  if (kind == ScenarioKind::binomial_fet) {
    if (!(trials_size > 0.0 && trials_mean > 0.0)) fail("trials_size and trials_mean must be positive");
    if (trials_offset < 0) fail("trials_offset must be >= 0");
    if (!(theta2_cap > 0.0 && theta2_cap <= 1.0)) fail("theta2_cap must lie in (0, 1]");
  }
}

ScenarioParameters draw_parameters(const ScenarioSpec& spec, std::size_t rep) {
  spec.validate();
  Rng rng(spec.seed, {rep, stream::parameters});
  const std::size_t m = spec.m;
  const std::size_t m0 = spec.null_count();

  ScenarioParameters p;
  p.theta1.resize(m);
  p.theta2.resize(m);
  p.truth.assign(m, false);
  for (std::size_t i = 0; i < m0; ++i) p.truth[i] = true;

  if (spec.kind == ScenarioKind::binomial_fet) {
    p.trials.resize(m);
    for (auto& r : p.trials) {
      r = rng.negative_binomial(spec.trials_size, spec.trials_mean) +
          spec.trials_offset;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    switch (spec.kind) {
      case ScenarioKind::poisson_bin:
        p.theta1[i] = rng.pareto(spec.theta_location, spec.theta_shape);
        break;
      case ScenarioKind::binomial_fet:
        p.theta1[i] = rng.uniform(spec.theta_min, spec.theta_max);
        break;
      case ScenarioKind::negbinom_ent:
        p.theta1[i] = spec.theta1_values.empty()
                          ? rng.uniform(spec.theta_min, spec.theta_max)
                          : spec.theta1_values[i % spec.theta1_values.size()];
        break;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double t1 = p.theta1[i];
    if (i < m0) {
      p.theta2[i] = t1;
      continue;
    }
    double rho = 0.0;
    if (spec.rho_fixed) {
      rho = *spec.rho_fixed;
    } else if (spec.kind == ScenarioKind::negbinom_ent) {
      rho = rng.pareto(spec.rho_location, spec.rho_shape);
    } else {
      rho = rng.uniform(spec.rho_min, spec.rho_max);
    }
    if (spec.kind == ScenarioKind::binomial_fet) {
      const double odds = rho * t1 / (1.0 - t1);
      p.theta2[i] = spec.theta2_rule == Theta2Rule::odds
                        ? odds / (1.0 + odds)
                        : std::min(odds, spec.theta2_cap);
    } else {
      p.theta2[i] = rho * t1;
    }
  }
  return p;
}

Study simulate_study(const ScenarioSpec& spec, const ScenarioParameters& params,
                     std::size_t rep) {
  Rng rng(spec.seed, {rep, stream::counts});
  const std::size_t m = params.theta1.size();
  std::vector<TestResult> results;
  results.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t1 = params.theta1[i];
    const double t2 = params.theta2[i];
    switch (spec.kind) {
      case ScenarioKind::poisson_bin: {
        const auto x1 = rng.poisson(t1);
        const auto x2 = rng.poisson(t2);
        results.push_back(binomial_test(x1, x2, spec.convention));
        break;
      }
      case ScenarioKind::binomial_fet: {
        const auto r = params.trials[i];
        const auto x1 = rng.binomial(r, t1);
        const auto x2 = rng.binomial(r, t2);
        results.push_back(fisher_test(x1, r, x2, r, spec.convention));
        break;
      }
      case ScenarioKind::negbinom_ent: {
        const double size = 1.0 / spec.dispersion;
        std::int64_t s1 = 0, s2 = 0;
        for (int k = 0; k < spec.reps_per_group; ++k) s1 += rng.negative_binomial(size, t1);
        for (int k = 0; k < spec.reps_per_group; ++k) s2 += rng.negative_binomial(size, t2);
        results.push_back(
            nb_exact_test(s1, s2, size, spec.reps_per_group, spec.convention));
        break;
      }
    }
  }
  Study study = make_study(results);
  study.truth = params.truth;
  return study;
}

Study generate_scenario(const ScenarioSpec& spec, std::size_t rep) {
  return simulate_study(spec, draw_parameters(spec, rep), rep);
}

Moments moments_of(const std::vector<double>& xs) {
  Moments mo;
  mo.n = xs.size();
  if (xs.empty()) return mo;
  mo.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(mo.n);
  if (mo.n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mo.mean) * (x - mo.mean);
    mo.sd = std::sqrt(ss / static_cast<double>(mo.n - 1));
    mo.se = mo.sd / std::sqrt(static_cast<double>(mo.n));
  }
  return mo;
}

std::vector<double> ReplicationSummary::excess(Method method) const {
  std::vector<double> out;
  for (const auto& rec : records) {
    for (const auto& mo : rec.methods) {
      if (mo.method == method) out.push_back(mo.pi0 - rec.true_pi0);
    }
  }
  return out;
}

std::vector<double> ReplicationSummary::fdp(Method method, double alpha) const {
  return collect(*this, method, alpha, [](const ProcedureOutcome& p) { return p.fdp; });
}

std::vector<double> ReplicationSummary::rejections(Method method, double alpha) const {
  return collect(*this, method, alpha, [](const ProcedureOutcome& p) {
    return static_cast<double>(p.rejections);
  });
}

std::vector<double> ReplicationSummary::thresholds(Method method, double alpha) const {
  return collect(*this, method, alpha,
                 [](const ProcedureOutcome& p) { return p.threshold; });
}

ReplicationRecord run_replication(const ScenarioSpec& spec, std::size_t rep) {
  const Study study = generate_scenario(spec, rep);
  const auto pvalues = study.pvalues();
  const RejectionProcess proc(pvalues);
  const auto& truth = *study.truth;

  ReplicationRecord rec;
  rec.rep = rep;
  rec.true_pi0 = static_cast<double>(spec.null_count()) / static_cast<double>(spec.m);

  auto outcome = [&](const ThresholdResult& r, double alpha) {
    ProcedureOutcome po;
    po.alpha = alpha;
    po.threshold = r.t_alpha;
    po.rejections = r.rejections;
    for (auto i : r.rejected) {
      if (truth[i]) ++po.false_discoveries;
    }
    po.true_discoveries = po.rejections - po.false_discoveries;
    po.fdp = po.rejections == 0 ? 1.0
                                : static_cast<double>(po.false_discoveries) /
                                      static_cast<double>(po.rejections);
    return po;
  };

  for (Method method : spec.methods) {
    MethodOutcome mo;
    mo.method = method;
    std::optional<FdrEstimator> est;
    Pi0Estimate b_pi0;
    switch (method) {
      case Method::generalized:
        est = FdrEstimator::generalized(study, spec.lambda, spec.epsilon);
        break;
      case Method::storey:
        est = FdrEstimator::storey(study, spec.lambda);
        break;
      case Method::pounds_tilde:
        est = FdrEstimator::plug_in(pounds_tilde_pi0(study));
        break;
      case Method::pounds_hat:
        est = FdrEstimator::plug_in(pounds_hat_pi0(study));
        break;
      case Method::bh:
        b_pi0 = fixed_pi0(1.0);
        break;
      case Method::adaptive_bh:
        b_pi0 = benjamini_pi0(study);
        break;
    }
    mo.pi0 = est ? est->source.value : b_pi0.value;
    for (double alpha : spec.alphas) {
      if (est) {
        mo.by_alpha.push_back(outcome(threshold(*est, proc, alpha), alpha));
      } else if (method == Method::bh) {
        mo.by_alpha.push_back(outcome(bh_procedure(pvalues, alpha), alpha));
      } else {
        mo.by_alpha.push_back(outcome(adaptive_bh(pvalues, alpha, b_pi0), alpha));
      }
    }
    rec.methods.push_back(std::move(mo));
  }
  return rec;
}

ReplicationSummary run_replications(const ScenarioSpec& spec) {
  spec.validate();
  ReplicationSummary summary;
  summary.spec = spec;
  summary.records.resize(spec.reps);
  parallel_for(spec.reps, spec.threads, [&](std::size_t rep) {
    summary.records[rep] = run_replication(spec, rep);
  });
  summary.sd_defined = spec.reps >= 2;
  return summary;
}

}  // namespace dfdr
