#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mixid {

// Portable PRNG: std::mt19937_64 is bit-specified by the standard, and the
// derived draws below avoid the implementation-defined std distributions.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();                      // [0, 1), 53 random bits
  double uniform(double lo, double hi);    // [lo, hi)
  std::uint64_t below(std::uint64_t n);    // [0, n), unbiased
  int range(int lo, int hi);               // [lo, hi] inclusive
  std::vector<double> flat_dirichlet(int n);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 mix of (seed, stream); per-chain seeds for independent starts.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mixid
