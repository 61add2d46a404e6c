#include "crawlfresh/random_source.hpp"

#include <cmath>
#include <stdexcept>

namespace crawlfresh {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= index + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return splitmix64(s);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}

RandomSource RandomSource::stream(std::uint64_t index) const {
  return RandomSource(derive_seed(seed_, index));
}

std::uint64_t RandomSource::next_u64() { return gen_(); }

double RandomSource::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomSource::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  // u in [0,1) keeps log1p(-u) finite
  return -std::log1p(-uniform()) / rate;
}

}  // namespace crawlfresh
