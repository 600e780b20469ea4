#include "dfdr/rng.hpp"

#include <cmath>

namespace dfdr {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (auto step : path) h = splitmix64(h ^ splitmix64(step + 0x632BE59BD9B4E019ULL));
  return h;
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

std::size_t Rng::index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::int64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(mean)(engine_);
}

std::int64_t Rng::binomial(std::int64_t trials, double prob) {
  if (trials <= 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  return std::binomial_distribution<std::int64_t>(trials, prob)(engine_);
}

double Rng::gamma(double shape, double scale) {
  return std::gamma_distribution<double>(shape, scale)(engine_);
}

std::int64_t Rng::negative_binomial(double size, double mean) {
  if (mean <= 0.0) return 0;
  return poisson(gamma(size, mean / size));
}

double Rng::pareto(double location, double shape) {
  // Inverse CDF on (0, 1]; 1 - U avoids a zero draw.
  const double u = 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  return location / std::pow(u, 1.0 / shape);
}

}  // namespace dfdr
