#pragma once

// Bootstrap choice of (lambda, epsilon) for the generalized pi0 estimator.
//
// For every grid point the full-sample estimate is computed, then B bootstrap
// resamples of the (p-value, support) pairs give B replicate estimates. The
// MSE of a point is the mean squared distance of its replicates to the
// smallest full-sample estimate over the grid, and the point with the least
// MSE wins (ties: smallest lambda, then smallest epsilon).
//
// Resample b is drawn from the stream (seed, stream::bootstrap, b) and shared
// by all grid points, so the choice is unaffected by grid order, by adding
// grid points, or by the thread count.

#include <cstdint>
#include <vector>

#include "dfdr/estimators.hpp"

namespace dfdr {

struct TuningPoint {
  double lambda = 0.5;
  double epsilon = 1.0;

  friend bool operator==(const TuningPoint&, const TuningPoint&) = default;
};

struct TuningGrid {
  std::vector<TuningPoint> points;
  std::size_t bootstraps = 100;  // B
  std::uint64_t seed = 1;
  unsigned threads = 1;

  // Cartesian product of the two axes.
  static TuningGrid product(const std::vector<double>& lambdas,
                            const std::vector<double>& epsilons);
};

struct TuningResult {
  TuningPoint chosen;
  std::vector<TuningPoint> points;   // grid order
  std::vector<double> full_sample;   // pi0G at each point
  std::vector<double> mse;           // estimated MSE at each point
  double target = 0.0;               // min over full_sample
  Pi0Estimate estimate;              // pi0G(lambda*, eps*)
};

// Indices of bootstrap resample b of m items.
std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t b,
                                           std::size_t m);

TuningResult bootstrap_tune(const Study& study, const TuningGrid& grid);

}  // namespace dfdr
