#pragma once

// Seedable, splittable random streams.
//
// A stream is identified by a base seed and a path of integers, e.g.
// (seed, replication, purpose). derive_seed() hashes the path with splitmix64
// so that sibling streams are statistically independent and adding a new
// stream never shifts existing ones. Every stream drives its own
// std::mt19937_64, which makes results independent of thread count.
//
// Documented stream paths:
//   simulation parameters   (seed, rep, 1)
//   simulation counts       (seed, rep, 2)
//   bootstrap resample b    (seed, 0xB007, b)

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dfdr {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

namespace stream {
inline constexpr std::uint64_t parameters = 1;
inline constexpr std::uint64_t counts = 2;
inline constexpr std::uint64_t bootstrap = 0xB007;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t base, std::initializer_list<std::uint64_t> path)
      : engine_(derive_seed(base, path)) {}

  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);  // uniform on 0..n-1
  std::int64_t poisson(double mean);
  std::int64_t binomial(std::int64_t trials, double prob);
  double gamma(double shape, double scale);
  // NB(size, mean) as a gamma-Poisson mixture; size may be non-integer.
  std::int64_t negative_binomial(double size, double mean);
  // Pareto with support [location, inf) and tail index `shape`.
  double pareto(double location, double shape);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dfdr
