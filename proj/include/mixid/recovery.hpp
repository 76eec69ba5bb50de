#pragma once

// Numerical parameter recovery from an exact (noise-free) distribution
// tensor: population EM from many seeded starts, a least-squares polish, and
// clustering of the results into label-permutation orbits. Floating point only.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixid/model.hpp"
#include "mixid/rng.hpp"
#include "mixid/separability.hpp"

namespace mixid {

struct RecoveryConfig {
  int K = 2;
  int starts = 64;
  std::uint64_t seed = 0;
  int max_iters = 500;           // EM iterations per start
  double em_tol = 1e-10;         // relative objective improvement
  double polish_tol = 1e-14;     // gradient sup-norm
  int polish_max_iters = 200;
  double orbit_tol = 1e-6;
  double residual_threshold = 1e-10;  // "exact solution" filter
  SizeCaps caps;

  void validate() const;
};

// Frequency floor applied when some observed cell has zero model likelihood.
inline constexpr double kFrequencyFloor = 1e-12;

struct EmDiagnostics {
  bool degenerate = false;          // zero-likelihood cells forced the floor
  std::size_t floored_entries = 0;
  int dead_components = 0;          // components that received no mass
};

// Sum_m dist(m) log model(m); -inf if the model misses observed mass.
double cross_entropy(const FloatTensor& dist, const FloatParams& params);

// Max |dist(m) - model(m)|.
double residual(const FloatTensor& dist, const FloatParams& params);

// One population-EM update. Parallel over fixed cell blocks whose partial sums
// are combined in block order, so results do not depend on the thread count.
FloatParams em_step(const FloatTensor& dist, const FloatParams& params, EmDiagnostics* diag = nullptr);

// Straight-line reference for em_step.
FloatParams em_step_serial(const FloatTensor& dist, const FloatParams& params, EmDiagnostics* diag = nullptr);

struct PolishResult {
  FloatParams params;
  double residual = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // false: iteration cap hit, best iterate returned
};

// Levenberg-Marquardt on sum_m (dist(m) - model(m))^2, with every step
// projected back onto the probability simplices.
PolishResult polish(const FloatParams& params, const FloatTensor& dist, const RecoveryConfig& cfg);

// Euclidean projection onto {x >= 0, sum x = 1}.
std::vector<double> project_to_simplex(std::span<const double> v);

// Interior start: frequencies eps + (1 - M eps) * Dirichlet(1), eps =
// min(0.05, 0.5 / M); weights Dirichlet(1).
FloatParams random_start(int K, int L, int M, Rng& rng);

struct Solution {
  int start = 0;
  std::uint64_t seed = 0;  // chain seed (0 when started from a supplied point)
  FloatParams params;
  double residual = 0.0;
  int em_iterations = 0;
  bool em_degenerate = false;
  int polish_iterations = 0;
  bool polish_converged = false;
};

struct Orbit {
  std::size_t representative = 0;
  std::vector<std::size_t> members;
  double best_residual = 0.0;
};

struct RecoveryReport {
  RecoveryConfig config;
  std::vector<Solution> solutions;
  std::vector<Orbit> orbits;  // canonical order
  std::size_t best = 0;
  std::optional<Verdict> verdict_hint;

  std::size_t converged_count() const;
};

RecoveryReport multi_start_recover(const FloatTensor& dist, const RecoveryConfig& cfg);

// Same pipeline from caller-supplied initial points instead of random starts.
RecoveryReport recover_from(const FloatTensor& dist, const RecoveryConfig& cfg, std::span<const FloatParams> inits);

// Groups solutions by orbit_equal at cfg.orbit_tol.
std::vector<Orbit> cluster_orbits(std::span<const Solution> solutions, double orbit_tol);

struct ProbeReport {
  bool unique_orbit = false;
  int orbits_found = 0;          // among solutions under the residual threshold
  std::size_t converged = 0;
  bool matches_truth = false;    // some converged solution is in the truth's orbit
  RecoveryReport recovery;
};

ProbeReport identifiability_probe(const ExactParams& truth, const RecoveryConfig& cfg);

}  // namespace mixid
