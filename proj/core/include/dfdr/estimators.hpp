#pragma once

// Estimators of the proportion of true null hypotheses for p-values whose
// null distributions are discrete and dominate the uniform.
//
// Every estimator reports both its raw value and the value clipped to [0, 1].

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dfdr/discrete_tests.hpp"

namespace dfdr {

// An observed p-value together with the support of its null distribution.
// An empty support means the null is treated as continuous uniform.
struct PValueProfile {
  double pvalue = 1.0;
  std::vector<double> support;

  PValueProfile() = default;
  PValueProfile(double p, std::vector<double> s)
      : pvalue(p), support(std::move(s)) {}
  explicit PValueProfile(const TestResult& r)
      : pvalue(r.pvalue), support(r.support) {}
};

struct Study {
  std::vector<PValueProfile> profiles;
  // Ground truth (true null?) per hypothesis; only simulations fill this in.
  std::optional<std::vector<bool>> truth;

  std::size_t size() const { return profiles.size(); }
  std::vector<double> pvalues() const;
};

Study make_study(std::span<const TestResult> results);
// Study with empty supports (uniform nulls).
Study uniform_study(std::span<const double> pvalues);

enum class Pi0Method { storey, generalized, pounds_tilde, pounds_hat, benjamini, fixed };

std::string_view to_string(Pi0Method method);

// Tuning weights for the generalized estimator: either one shared value or
// one weight per hypothesis.
class Epsilon {
 public:
  Epsilon(double shared = 1.0) : weights_{shared} {}  // NOLINT(google-explicit-constructor)
  explicit Epsilon(std::vector<double> per_hypothesis)
      : weights_(std::move(per_hypothesis)) {}

  bool is_shared() const { return weights_.size() == 1; }
  double at(std::size_t i) const { return is_shared() ? weights_[0] : weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double mean() const;

 private:
  std::vector<double> weights_;
};

struct Pi0Estimate {
  Pi0Method method = Pi0Method::fixed;
  double raw = 1.0;
  double value = 1.0;  // max(0, min(1, raw))
  std::optional<double> lambda;
  std::optional<Epsilon> epsilon;
};

double clip_unit(double x);

// F*(lambda) for one profile: the largest support point <= lambda, 0 if
// there is none, and lambda itself for an empty (uniform) support.
double support_cdf(const PValueProfile& profile, double lambda);

// E[p | H0] = sum_k t_k (t_k - t_{k-1}) over the support, t_0 = 0; 1/2 for an
// empty support.
double null_mean(const PValueProfile& profile);

// #{p_i > lambda} / ((1 - lambda) m)
Pi0Estimate storey_pi0(const Study& study, double lambda);

// sum_i [1{p_i > lambda} - eps_i (lambda - F_i*(lambda))] / ((1 - lambda) m).
// With eps = 0 or uniform nulls this is bit-for-bit storey_pi0.
Pi0Estimate generalized_pi0(const Study& study, double lambda,
                            const Epsilon& epsilon = Epsilon(1.0));

// min(1, 2 * mean(p)) for two-sided p-values.
Pi0Estimate pounds_tilde_pi0(const Study& study);

// min(1, mean(p_i / E[p_i | H0])).
Pi0Estimate pounds_hat_pi0(const Study& study);

// (m - k + 1) / (m (1 - p_(k))) with k = floor(m / 2); 1 when p_(k) = 1.
Pi0Estimate benjamini_pi0(const Study& study);

Pi0Estimate fixed_pi0(double value);

}  // namespace dfdr
