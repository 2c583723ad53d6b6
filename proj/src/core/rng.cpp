#include "excursion/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace excursion {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Engine replicate_engine(std::uint64_t seed, std::uint64_t index) {
  return Engine(splitmix64(splitmix64(seed) ^ splitmix64(~index)));
}

void fill_normals(Engine& engine, std::span<double> out) {
  boost::random::normal_distribution<double> normal;
  for (double& v : out) v = normal(engine);
}

}  // namespace excursion
