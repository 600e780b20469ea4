#pragma once

// Rejection process, Storey-type FDR estimators and their exact thresholds.
//
// For a one-step procedure rejecting {i : p_i <= t}, R(t) is the number of
// rejections and L(t) = t / (R(t) v 1) the scaled inverse rejection process.
// With the distinct p-values p_(1) < ... < p_(n), multiplicities n_j and
// running totals T_j, R is constant on [p_(j), p_(j+1)), so every
// Storey-type estimator pi0 * t * m / (R(t) v 1) is increasing in t between
// consecutive p-values and can only jump down at a p-value. threshold()
// exploits this to find sup{t : f(t) <= alpha} exactly.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfdr/estimators.hpp"

namespace dfdr {

class RejectionProcess {
 public:
  // Throws DomainError if `pvalues` is empty or has a value outside (0, 1].
  explicit RejectionProcess(std::span<const double> pvalues);

  std::size_t m() const { return pvalues_.size(); }
  std::size_t distinct_count() const { return distinct_.size(); }

  const std::vector<double>& pvalues() const { return pvalues_; }
  const std::vector<double>& distinct() const { return distinct_; }
  const std::vector<std::size_t>& multiplicity() const { return mult_; }
  const std::vector<std::size_t>& cumulative() const { return cum_; }

  // R(t) = #{i : p_i <= t}.
  std::size_t rejections(double t) const;

  // L(t) from its piecewise closed form:
  //   t          on [0, p_(1))
  //   t / T_j    on [p_(j), p_(j+1)), j = 1..n-1
  //   t / m      on [p_(n), max(p_(n), 1)]
  double inverse_rejection(double t) const;

  // L(p_(j)-) - L(p_(j)) for the 1-based distinct index j, from the closed
  // form on either side of p_(j).
  double jump(std::size_t j) const;

  // The jump predicted from the multiplicities: p_(j) n_j / (R (R - n_j)) with
  // R = R(p_(j)) for j >= 2, and p_(1) (1 - 1 / T_1) for j = 1, where the
  // left limit is t itself because R v 1 = 1 below p_(1).
  double predicted_jump(std::size_t j) const;

  // Original indices i with p_i <= t, ascending.
  std::vector<std::size_t> rejected(double t) const;

 private:
  std::vector<double> pvalues_;
  std::vector<double> distinct_;
  std::vector<std::size_t> mult_;
  std::vector<std::size_t> cum_;
};

enum class FdrKind {
  storey,             // pi0S(lambda) t / (m^-1 (R v 1))
  storey_variant,     // (pi0S + 1/((1-lambda)m)) t / (m^-1 (R v 1)) for t <= lambda, else 1
  generalized,        // min[1, pi0G(lambda, eps) t / (m^-1 (R v 1))]
  storey_type_sigma,  // min[1, pi0(lambda, sigma) t / (m^-1 (R v 1))]
};

std::string_view to_string(FdrKind kind);

struct FdrEstimator {
  FdrKind kind = FdrKind::generalized;
  double lambda = 0.5;
  // Multiplier applied to t m / (R v 1). For storey_variant this is the
  // unclipped pi0S + 1/((1 - lambda) m).
  double pi0 = 1.0;
  double sigma = 0.0;  // storey_type_sigma offset
  Pi0Estimate source;

  static FdrEstimator storey(const Study& study, double lambda);
  static FdrEstimator storey_variant(const Study& study, double lambda);
  static FdrEstimator generalized(const Study& study, double lambda,
                                  const Epsilon& epsilon = Epsilon(1.0));
  // sigma must lie in [0, (1 - lambda) m pi0S_raw(lambda)] = [0, #{p > lambda}].
  static FdrEstimator storey_type(const Study& study, double lambda, double sigma);
  // Clipped Storey-type estimator driven by an arbitrary pi0 estimate.
  static FdrEstimator plug_in(const Pi0Estimate& pi0);
};

struct ThresholdResult {
  std::string method;
  std::optional<double> lambda;
  std::optional<Epsilon> epsilon;
  double pi0 = 1.0;
  double alpha = 0.0;
  double t_alpha = 0.0;
  std::optional<double> fdr_at_t;  // empty for BH-type procedures
  std::size_t rejections = 0;
  std::vector<std::size_t> rejected;
};

double evaluate_fdr(const FdrEstimator& est, const RejectionProcess& proc,
                    double t);

// t_alpha(f) = sup{t in [0, 1] : f(t) <= alpha}, computed by scanning the
// intervals between distinct p-values from the right.
ThresholdResult threshold(const FdrEstimator& est, const RejectionProcess& proc,
                          double alpha);

// Linear step-up: reject p <= p_(k*) with k* = max{k : p_(k) <= k alpha / m}.
ThresholdResult bh_procedure(std::span<const double> pvalues, double alpha);

// BH at level min(1, alpha / pi0). Throws DomainError when pi0.value == 0.
ThresholdResult adaptive_bh(std::span<const double> pvalues, double alpha,
                            const Pi0Estimate& pi0);

// Fixed p-value multiset at which L has a downward jump at a p-value whose
// multiplicity exceeds the number of smaller p-values: distinct values
// (0.1, 0.4, 0.7, 1.0) with multiplicities (1, 3, 1, 1).
std::vector<double> counterexample_instance();

}  // namespace dfdr
