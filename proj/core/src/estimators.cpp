#include "dfdr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dfdr/error.hpp"

namespace dfdr {
namespace {

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("lambda must lie in [0, 1), got " + std::to_string(lambda));
  }
}

void require_nonempty(const Study& study) {
  if (study.profiles.empty()) throw DomainError("study has no hypotheses (m = 0)");
}

}  // namespace

std::vector<double> Study::pvalues() const {
  std::vector<double> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(p.pvalue);
  return out;
}

Study make_study(std::span<const TestResult> results) {
  Study s;
  s.profiles.reserve(results.size());
  for (const auto& r : results) s.profiles.emplace_back(r);
  return s;
}

Study uniform_study(std::span<const double> pvalues) {
  Study s;
  s.profiles.reserve(pvalues.size());
  for (double p : pvalues) s.profiles.emplace_back(p, std::vector<double>{});
  return s;
}

std::string_view to_string(Pi0Method method) {
  switch (method) {
    case Pi0Method::storey: return "storey";
    case Pi0Method::generalized: return "generalized";
    case Pi0Method::pounds_tilde: return "pounds_tilde";
    case Pi0Method::pounds_hat: return "pounds_hat";
    case Pi0Method::benjamini: return "benjamini";
    case Pi0Method::fixed: return "fixed";
  }
  return "?";
}

double Epsilon::mean() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0) /
         static_cast<double>(weights_.size());
}

double clip_unit(double x) { return std::max(0.0, std::min(1.0, x)); }

double support_cdf(const PValueProfile& profile, double lambda) {
  if (profile.support.empty()) return lambda;
  const auto& s = profile.support;
  auto it = std::upper_bound(s.begin(), s.end(), lambda);
  return it == s.begin() ? 0.0 : *(it - 1);
}

double null_mean(const PValueProfile& profile) {
  if (profile.support.empty()) return 0.5;
  double prev = 0.0;
  double mean = 0.0;
  for (double t : profile.support) {
    mean += t * (t - prev);
    prev = t;
  }
  return mean;
}

Pi0Estimate storey_pi0(const Study& study, double lambda) {
  require_nonempty(study);
  require_lambda(lambda);
  double above = 0.0;
  for (const auto& p : study.profiles) {
    if (p.pvalue > lambda) above += 1.0;
  }
  const double m = static_cast<double>(study.size());
  Pi0Estimate e;
  e.method = Pi0Method::storey;
  e.raw = above / ((1.0 - lambda) * m);
  e.value = clip_unit(e.raw);
  e.lambda = lambda;
  e.epsilon = Epsilon(0.0);
  return e;
}

Pi0Estimate generalized_pi0(const Study& study, double lambda,
                            const Epsilon& epsilon) {
  require_nonempty(study);
  require_lambda(lambda);
  const std::size_t m = study.size();
  if (!epsilon.is_shared() && epsilon.weights().size() != m) {
    throw DomainError("epsilon has " + std::to_string(epsilon.weights().size()) +
                      " weights for " + std::to_string(m) + " hypotheses");
  }
  for (double w : epsilon.weights()) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw DomainError("epsilon weights must lie in [0, 1]");
    }
  }

  // Terms are integers when every eps_i (lambda - t_i) vanishes, so the sum is
  // exact and the division below reproduces storey_pi0 bit for bit.
  double numerator = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = study.profiles[i];
    const double indicator = p.pvalue > lambda ? 1.0 : 0.0;
    const double gap = lambda - support_cdf(p, lambda);
    numerator += indicator - epsilon.at(i) * gap;
  }
  Pi0Estimate e;
  e.method = Pi0Method::generalized;
  e.raw = numerator / ((1.0 - lambda) * static_cast<double>(m));
  e.value = clip_unit(e.raw);
  e.lambda = lambda;
  e.epsilon = epsilon;
  return e;
}

Pi0Estimate pounds_tilde_pi0(const Study& study) {
  require_nonempty(study);
  double total = 0.0;
  for (const auto& p : study.profiles) total += p.pvalue;
  Pi0Estimate e;
  e.method = Pi0Method::pounds_tilde;
  e.raw = 2.0 * total / static_cast<double>(study.size());
  e.value = clip_unit(e.raw);
  return e;
}

Pi0Estimate pounds_hat_pi0(const Study& study) {
  require_nonempty(study);
  double total = 0.0;
  for (const auto& p : study.profiles) total += p.pvalue / null_mean(p);
  Pi0Estimate e;
  e.method = Pi0Method::pounds_hat;
  e.raw = total / static_cast<double>(study.size());
  e.value = clip_unit(e.raw);
  return e;
}

Pi0Estimate benjamini_pi0(const Study& study) {
  const std::size_t m = study.size();
  if (m < 2) throw DomainError("benjamini estimator needs m >= 2");
  const std::size_t k = m / 2;
  auto p = study.pvalues();
  std::nth_element(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k - 1), p.end());
  const double pk = p[k - 1];

  Pi0Estimate e;
  e.method = Pi0Method::benjamini;
  if (pk >= 1.0) {
    e.raw = 1.0;
  } else {
    e.raw = static_cast<double>(m - k + 1) /
            (static_cast<double>(m) * (1.0 - pk));
  }
  e.value = clip_unit(e.raw);
  return e;
}

Pi0Estimate fixed_pi0(double value) {
  Pi0Estimate e;
  e.method = Pi0Method::fixed;
  e.raw = value;
  e.value = clip_unit(value);
  return e;
}

}  // namespace dfdr
