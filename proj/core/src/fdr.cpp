#include "dfdr/fdr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dfdr/error.hpp"

namespace dfdr {
namespace {

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

bool is_clipped(FdrKind kind) {
  return kind == FdrKind::generalized || kind == FdrKind::storey_type_sigma;
}

ThresholdResult bh_at_level(std::span<const double> pvalues, double level) {
  if (pvalues.empty()) throw DomainError("BH needs at least one p-value");
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());

  std::size_t k_star = 0;
  for (std::size_t k = sorted.size(); k >= 1; --k) {
    if (sorted[k - 1] <= static_cast<double>(k) * level / m) {
      k_star = k;
      break;
    }
  }
  ThresholdResult r;
  r.method = "bh";
  r.alpha = level;
  r.pi0 = 1.0;
  r.t_alpha = k_star == 0 ? 0.0 : sorted[k_star - 1];
  if (k_star > 0) {
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
      if (pvalues[i] <= r.t_alpha) r.rejected.push_back(i);
    }
  }
  r.rejections = r.rejected.size();
  return r;
}

}  // namespace

RejectionProcess::RejectionProcess(std::span<const double> pvalues)
    : pvalues_(pvalues.begin(), pvalues.end()) {
  if (pvalues_.empty()) throw DomainError("rejection process needs m >= 1");
  for (double p : pvalues_) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw DomainError("p-value outside (0, 1]: " + std::to_string(p));
    }
  }
  std::vector<double> sorted(pvalues_);
  std::sort(sorted.begin(), sorted.end());
  std::size_t total = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    distinct_.push_back(sorted[i]);
    mult_.push_back(j - i);
    total += j - i;
    cum_.push_back(total);
    i = j;
  }
}

std::size_t RejectionProcess::rejections(double t) const {
  const auto j = static_cast<std::size_t>(
      std::upper_bound(distinct_.begin(), distinct_.end(), t) - distinct_.begin());
  return j == 0 ? 0 : cum_[j - 1];
}

double RejectionProcess::inverse_rejection(double t) const {
  const auto j = static_cast<std::size_t>(
      std::upper_bound(distinct_.begin(), distinct_.end(), t) - distinct_.begin());
  if (j == 0) return t;
  if (j == distinct_.size()) return t / static_cast<double>(m());
  return t / static_cast<double>(cum_[j - 1]);
}

double RejectionProcess::jump(std::size_t j) const {
  if (j < 1 || j > distinct_.size()) throw DomainError("jump index out of range");
  const double p = distinct_[j - 1];
  const double left = j == 1 ? p : p / static_cast<double>(cum_[j - 2]);
  return left - p / static_cast<double>(cum_[j - 1]);
}

double RejectionProcess::predicted_jump(std::size_t j) const {
  if (j < 1 || j > distinct_.size()) throw DomainError("jump index out of range");
  const double p = distinct_[j - 1];
  const double r = static_cast<double>(cum_[j - 1]);
  const double n = static_cast<double>(mult_[j - 1]);
  if (j == 1) return p * (1.0 - 1.0 / r);
  return p * n / (r * (r - n));
}

std::vector<std::size_t> RejectionProcess::rejected(double t) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pvalues_.size(); ++i) {
    if (pvalues_[i] <= t) out.push_back(i);
  }
  return out;
}

std::string_view to_string(FdrKind kind) {
  switch (kind) {
    case FdrKind::storey: return "storey";
    case FdrKind::storey_variant: return "storey_variant";
    case FdrKind::generalized: return "generalized";
    case FdrKind::storey_type_sigma: return "storey_type_sigma";
  }
  return "?";
}

FdrEstimator FdrEstimator::storey(const Study& study, double lambda) {
  FdrEstimator e;
  e.kind = FdrKind::storey;
  e.lambda = lambda;
  e.source = storey_pi0(study, lambda);
  e.pi0 = e.source.value;
  return e;
}

FdrEstimator FdrEstimator::storey_variant(const Study& study, double lambda) {
  FdrEstimator e;
  e.kind = FdrKind::storey_variant;
  e.lambda = lambda;
  e.source = storey_pi0(study, lambda);
  e.pi0 = e.source.value +
          1.0 / ((1.0 - lambda) * static_cast<double>(study.size()));
  return e;
}

FdrEstimator FdrEstimator::generalized(const Study& study, double lambda,
                                       const Epsilon& epsilon) {
  FdrEstimator e;
  e.kind = FdrKind::generalized;
  e.lambda = lambda;
  e.source = generalized_pi0(study, lambda, epsilon);
  e.pi0 = e.source.value;
  return e;
}

FdrEstimator FdrEstimator::storey_type(const Study& study, double lambda,
                                       double sigma) {
  const auto s = storey_pi0(study, lambda);
  const double scale = (1.0 - lambda) * static_cast<double>(study.size());
  const double upper = scale * s.raw;
  // upper is an integer count up to rounding; allow for that rounding.
  if (!(sigma >= 0.0 && sigma <= upper * (1.0 + 1e-12))) {
    throw DomainError("sigma must lie in [0, " + std::to_string(upper) + "]");
  }
  FdrEstimator e;
  e.kind = FdrKind::storey_type_sigma;
  e.lambda = lambda;
  e.sigma = sigma;
  e.source = s;
  e.source.raw = s.raw - sigma / scale;
  e.source.value = clip_unit(e.source.raw);
  e.pi0 = e.source.value;
  return e;
}

FdrEstimator FdrEstimator::plug_in(const Pi0Estimate& pi0) {
  FdrEstimator e;
  e.kind = FdrKind::storey_type_sigma;
  e.lambda = pi0.lambda.value_or(0.0);
  e.source = pi0;
  e.pi0 = pi0.value;
  return e;
}

double evaluate_fdr(const FdrEstimator& est, const RejectionProcess& proc,
                    double t) {
  if (est.kind == FdrKind::storey_variant && t > est.lambda) return 1.0;
  const double r = static_cast<double>(std::max<std::size_t>(proc.rejections(t), 1));
  const double value = est.pi0 * t * static_cast<double>(proc.m()) / r;
  return is_clipped(est.kind) ? std::min(1.0, value) : value;
}

ThresholdResult threshold(const FdrEstimator& est, const RejectionProcess& proc,
                          double alpha) {
  require_alpha(alpha);
  const auto& p = proc.distinct();
  const auto& cum = proc.cumulative();
  const std::size_t n = p.size();
  const double m = static_cast<double>(proc.m());
  const bool variant = est.kind == FdrKind::storey_variant;
  // Points with t > cap always have f = 1 (variant) so only matter when alpha >= 1.
  const double cap = (variant && alpha < 1.0) ? est.lambda : 1.0;

  double t = 0.0;
  if (is_clipped(est.kind) && alpha >= 1.0) {
    t = 1.0;
  } else if (est.pi0 <= 0.0) {
    t = cap;
  } else {
    // Interval k: k = 0 is [0, p_(1)); 1 <= k < n is [p_(k), p_(k+1));
    // k = n is [p_(n), 1]. R v 1 is constant on each.
    for (std::size_t k = n + 1; k-- > 0;) {
      const double lo = k == 0 ? 0.0 : p[k - 1];
      double hi = k == n ? 1.0 : p[k];
      if (lo > cap) continue;
      hi = std::min(hi, cap);
      const double r = k == 0 ? 1.0 : static_cast<double>(cum[k - 1]);
      const double crossing = alpha * r / (m * est.pi0);
      if (crossing >= lo) {
        t = std::min(crossing, hi);
        // Guard against the last-ulp overshoot of alpha r / (m pi0).
        while (t > lo && evaluate_fdr(est, proc, t) > alpha) {
          t = std::nextafter(t, lo);
        }
        break;
      }
    }
  }

  ThresholdResult r;
  r.method = std::string(to_string(est.kind));
  r.lambda = est.lambda;
  r.epsilon = est.source.epsilon;
  r.pi0 = est.pi0;
  r.alpha = alpha;
  r.t_alpha = t;
  r.fdr_at_t = evaluate_fdr(est, proc, t);
  r.rejected = proc.rejected(t);
  r.rejections = r.rejected.size();
  return r;
}

ThresholdResult bh_procedure(std::span<const double> pvalues, double alpha) {
  require_alpha(alpha);
  return bh_at_level(pvalues, alpha);
}

ThresholdResult adaptive_bh(std::span<const double> pvalues, double alpha,
                            const Pi0Estimate& pi0) {
  require_alpha(alpha);
  if (!(pi0.value > 0.0)) {
    throw DomainError("adaptive BH undefined for pi0 = 0");
  }
  auto r = bh_at_level(pvalues, std::min(1.0, alpha / pi0.value));
  r.method = "adaptive_bh";
  r.alpha = alpha;
  r.pi0 = pi0.value;
  return r;
}

std::vector<double> counterexample_instance() {
  return {0.1, 0.4, 0.4, 0.4, 0.7, 1.0};
}

}  // namespace dfdr
