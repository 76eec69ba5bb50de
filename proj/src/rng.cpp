#include "mixid/rng.hpp"

#include <cmath>

#include "mixid/error.hpp"

namespace mixid {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint64_t Rng::below(std::uint64_t n) {
  require(n > 0, "Rng::below requires n > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

int Rng::range(int lo, int hi) {
  require(lo <= hi, "Rng::range requires lo <= hi");
  return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::vector<double> Rng::flat_dirichlet(int n) {
  std::vector<double> out(n);
  double total = 0.0;
  for (auto& x : out) {
    x = -std::log1p(-uniform01());  // Exp(1)
    total += x;
  }
  for (auto& x : out) x /= total;
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mixid
