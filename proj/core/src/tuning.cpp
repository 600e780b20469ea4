#include "dfdr/tuning.hpp"

#include <algorithm>
#include <string>

#include "dfdr/error.hpp"
#include "dfdr/parallel.hpp"
#include "dfdr/rng.hpp"

namespace dfdr {

TuningGrid TuningGrid::product(const std::vector<double>& lambdas,
                               const std::vector<double>& epsilons) {
  TuningGrid g;
  for (double l : lambdas) {
    for (double e : epsilons) g.points.push_back({l, e});
  }
  return g;
}

std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t b,
                                           std::size_t m) {
  Rng rng(seed, {stream::bootstrap, b});
  std::vector<std::size_t> idx(m);
  for (auto& i : idx) i = rng.index(m);
  return idx;
}

TuningResult bootstrap_tune(const Study& study, const TuningGrid& grid) {
  const std::size_t m = study.size();
  if (m < 2) throw DomainError("bootstrap tuning needs m >= 2");
  if (grid.points.empty()) throw ConfigError("tuning grid is empty");
  if (grid.bootstraps < 1) throw ConfigError("bootstrap count B must be >= 1");
  for (const auto& pt : grid.points) {
    if (!(pt.lambda >= 0.0 && pt.lambda < 1.0) ||
        !(pt.epsilon >= 0.0 && pt.epsilon <= 1.0)) {
      throw ConfigError("grid point (" + std::to_string(pt.lambda) + ", " +
                        std::to_string(pt.epsilon) +
                        ") outside [0, 1) x [0, 1]");
    }
  }

  const std::size_t G = grid.points.size();
  TuningResult out;
  out.points = grid.points;
  out.full_sample.resize(G);
  out.mse.resize(G);
  for (std::size_t g = 0; g < G; ++g) {
    const auto& pt = grid.points[g];
    out.full_sample[g] = generalized_pi0(study, pt.lambda, pt.epsilon).value;
  }
  out.target = *std::min_element(out.full_sample.begin(), out.full_sample.end());

  std::vector<std::vector<std::size_t>> resamples(grid.bootstraps);
  parallel_for(grid.bootstraps, grid.threads, [&](std::size_t b) {
    resamples[b] = bootstrap_indices(grid.seed, b, m);
  });

  parallel_for(G, grid.threads, [&](std::size_t g) {
    const auto& pt = grid.points[g];
    // Per-profile summands of the generalized estimator at this point; a
    // resample's estimate is the clipped mean of its summands.
    std::vector<double> term(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& p = study.profiles[i];
      term[i] = (p.pvalue > pt.lambda ? 1.0 : 0.0) -
                pt.epsilon * (pt.lambda - support_cdf(p, pt.lambda));
    }
    const double scale = (1.0 - pt.lambda) * static_cast<double>(m);
    double sq = 0.0;
    for (const auto& idx : resamples) {
      double numerator = 0.0;
      for (auto i : idx) numerator += term[i];
      const double d = clip_unit(numerator / scale) - out.target;
      sq += d * d;
    }
    out.mse[g] = sq / static_cast<double>(grid.bootstraps);
  });

  std::size_t best = 0;
  for (std::size_t g = 1; g < G; ++g) {
    const auto& a = grid.points[g];
    const auto& b = grid.points[best];
    if (out.mse[g] < out.mse[best] ||
        (out.mse[g] == out.mse[best] &&
         (a.lambda < b.lambda || (a.lambda == b.lambda && a.epsilon < b.epsilon)))) {
      best = g;
    }
  }
  out.chosen = grid.points[best];
  out.estimate = generalized_pi0(study, out.chosen.lambda, out.chosen.epsilon);
  return out;
}

}  // namespace dfdr
