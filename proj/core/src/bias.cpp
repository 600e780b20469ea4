// Exact bias terms of the pi0 estimators by enumerating each hypothesis'
// outcome distribution under the simulated (true) parameters.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "dfdr/error.hpp"
#include "dfdr/parallel.hpp"
#include "dfdr/sim.hpp"

namespace dfdr {
namespace {

constexpr double kMaxMassDeficit = 1e-6;

// Conditional test of one total: p-value per outcome and F*(lambda).
struct TotalTable {
  std::int64_t offset = 0;
  std::vector<double> pvalues;
  double null_cdf = 0.0;
};

TotalTable make_table(const ConditionalLaw& law, double lambda,
                      PValueConvention convention) {
  TotalTable t;
  t.offset = law.offset;
  t.pvalues = outcome_pvalues(law.pmf, convention);
  t.null_cdf = support_cdf(PValueProfile(1.0, support_of(t.pvalues)), lambda);
  return t;
}

std::vector<double> log_factorials(std::size_t n) {
  std::vector<double> lf(n + 1);
  for (std::size_t k = 0; k <= n; ++k) lf[k] = std::lgamma(static_cast<double>(k) + 1.0);
  return lf;
}

double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : -INFINITY; }

// pmf of Binomial(n, q) over 0..n using precomputed log factorials.
std::vector<double> binomial_pmf(std::int64_t n, double q,
                                 const std::vector<double>& lf) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  if (q <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (q >= 1.0) {
    out.back() = 1.0;
    return out;
  }
  const double lq = std::log(q), l1q = std::log1p(-q);
  const auto nn = static_cast<std::size_t>(n);
  for (std::size_t a = 0; a <= nn; ++a) {
    out[a] = std::exp(lf[nn] - lf[a] - lf[nn - a] + static_cast<double>(a) * lq +
                      static_cast<double>(nn - a) * l1q);
  }
  return out;
}

void accumulate(HypothesisMoments& h, double weight, double pvalue, double lambda) {
  if (pvalue <= lambda) h.cdf_at_lambda += weight;
  h.mean_pvalue += weight * pvalue;
}

std::vector<HypothesisMoments> enumerate_poisson(const ScenarioSpec& spec,
                                                 const ScenarioParameters& par,
                                                 double lambda, std::size_t T) {
  std::vector<TotalTable> tables(T + 1);
  for (std::size_t n = 0; n <= T; ++n) {
    tables[n] = make_table(binomial_null_law(static_cast<std::int64_t>(n)), lambda,
                           spec.convention);
  }
  const auto lf = log_factorials(T);
  std::vector<HypothesisMoments> out(par.theta1.size());
  parallel_for(out.size(), spec.threads, [&](std::size_t i) {
    HypothesisMoments h;
    h.mass = 0.0;
    const double mu = par.theta1[i] + par.theta2[i];
    const double q = par.theta1[i] / mu;
    const double lmu = log_or_neg_inf(mu);
    for (std::size_t n = 0; n <= T; ++n) {
      const double w = std::exp(static_cast<double>(n) * lmu - mu - lf[n]);
      if (w == 0.0) continue;
      h.mass += w;
      h.null_cdf_at_lambda += w * tables[n].null_cdf;
      const auto pmf = binomial_pmf(static_cast<std::int64_t>(n), q, lf);
      for (std::size_t a = 0; a <= n; ++a) {
        accumulate(h, w * pmf[a], tables[n].pvalues[a], lambda);
      }
    }
    out[i] = h;
  });
  return out;
}

std::vector<HypothesisMoments> enumerate_fisher(const ScenarioSpec& spec,
                                                const ScenarioParameters& par,
                                                double lambda) {
  std::int64_t max_r = 0;
  for (auto r : par.trials) max_r = std::max(max_r, r);
  const auto lf = log_factorials(static_cast<std::size_t>(max_r));

  // Tables per trial count r (both groups share r), indexed by total s.
  std::map<std::int64_t, std::vector<TotalTable>> by_trials;
  for (auto r : par.trials) {
    if (by_trials.count(r)) continue;
    auto& tabs = by_trials[r];
    for (std::int64_t s = 0; s <= 2 * r; ++s) {
      tabs.push_back(make_table(fisher_null_law(r, r, s), lambda, spec.convention));
    }
  }

  std::vector<HypothesisMoments> out(par.theta1.size());
  parallel_for(out.size(), spec.threads, [&](std::size_t i) {
    HypothesisMoments h;
    const auto r = par.trials[i];
    const auto& tabs = by_trials.at(r);
    const auto pa = binomial_pmf(r, par.theta1[i], lf);
    const auto pb = binomial_pmf(r, par.theta2[i], lf);
    for (std::int64_t a = 0; a <= r; ++a) {
      for (std::int64_t b = 0; b <= r; ++b) {
        const double w = pa[static_cast<std::size_t>(a)] * pb[static_cast<std::size_t>(b)];
        if (w == 0.0) continue;
        const auto& tab = tabs[static_cast<std::size_t>(a + b)];
        h.null_cdf_at_lambda += w * tab.null_cdf;
        accumulate(h, w, tab.pvalues[static_cast<std::size_t>(a - tab.offset)], lambda);
      }
    }
    out[i] = h;
  });
  return out;
}

std::vector<HypothesisMoments> enumerate_nb(const ScenarioSpec& spec,
                                            const ScenarioParameters& par,
                                            double lambda, std::size_t T) {
  const double size = 1.0 / spec.dispersion;
  const int reps = spec.reps_per_group;
  const double group_size = size * reps;
  std::vector<TotalTable> tables(2 * T + 1);
  parallel_for(tables.size(), spec.threads, [&](std::size_t s) {
    tables[s] = make_table(nb_null_law(static_cast<std::int64_t>(s), size, reps),
                           lambda, spec.convention);
  });

  std::vector<HypothesisMoments> out(par.theta1.size());
  parallel_for(out.size(), spec.threads, [&](std::size_t i) {
    HypothesisMoments h;
    std::vector<double> f1(T + 1), f2(T + 1);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k <= T; ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      f1[k] = nb_pmf(kk, group_size, reps * par.theta1[i]);
      f2[k] = nb_pmf(kk, group_size, reps * par.theta2[i]);
      m1 += f1[k];
      m2 += f2[k];
    }
    h.mass = m1 * m2;
    for (std::size_t a = 0; a <= T; ++a) {
      if (f1[a] == 0.0) continue;
      for (std::size_t b = 0; b <= T; ++b) {
        const double w = f1[a] * f2[b];
        if (w == 0.0) continue;
        const auto& tab = tables[a + b];
        h.null_cdf_at_lambda += w * tab.null_cdf;
        accumulate(h, w, tab.pvalues[a], lambda);
      }
    }
    out[i] = h;
  });
  return out;
}

}  // namespace

BiasDecomposition bias_from_moments(std::vector<HypothesisMoments> hypotheses,
                                    const std::vector<bool>& truth,
                                    double lambda, double epsilon) {
  const std::size_t m = hypotheses.size();
  if (m == 0 || truth.size() != m) {
    throw DomainError("bias oracle needs one truth label per hypothesis");
  }
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in [0, 1)");
  const double md = static_cast<double>(m);

  BiasDecomposition d;
  d.lambda = lambda;
  d.epsilon = epsilon;
  double nulls = 0.0;
  double cdf_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& h = hypotheses[i];
    cdf_sum += h.cdf_at_lambda - epsilon * h.null_cdf_at_lambda;
    if (truth[i]) {
      nulls += 1.0;
      d.pounds_null_term += 2.0 / md * (h.mean_pvalue - 0.5);
    } else {
      d.pounds_alt_term += 2.0 / md * h.mean_pvalue;
    }
    d.max_mass_deficit = std::max(d.max_mass_deficit, 1.0 - h.mass);
  }
  d.pi0 = nulls / md;
  d.bias_generalized = (1.0 - epsilon * lambda) / (1.0 - lambda) -
                       cdf_sum / ((1.0 - lambda) * md) - d.pi0;
  d.bias_pounds = d.pounds_null_term + d.pounds_alt_term;
  d.hypotheses = std::move(hypotheses);
  return d;
}

BiasDecomposition bias_decomposition(const ScenarioSpec& spec, double lambda,
                                     double epsilon, std::size_t truncation,
                                     std::size_t rep) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  const auto par = draw_parameters(spec, rep);
  std::vector<HypothesisMoments> moments;
  switch (spec.kind) {
    case ScenarioKind::poisson_bin:
      moments = enumerate_poisson(spec, par, lambda, truncation);
      break;
    case ScenarioKind::binomial_fet:
      moments = enumerate_fisher(spec, par, lambda);
      break;
    case ScenarioKind::negbinom_ent:
      moments = enumerate_nb(spec, par, lambda, truncation);
      break;
  }
  auto d = bias_from_moments(std::move(moments), par.truth, lambda, epsilon);
  if (d.max_mass_deficit > kMaxMassDeficit) {
    throw DomainError("truncation " + std::to_string(truncation) + " leaves " +
                      std::to_string(d.max_mass_deficit) +
                      " probability mass unaccounted; use a larger bound");
  }
  return d;
}

}  // namespace dfdr
