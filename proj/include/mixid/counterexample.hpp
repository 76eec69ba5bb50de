#pragma once

// Explicit non-identifiable pairs. For K >= 2 and 1 <= Lbar <= 2K-2:
//
//   w_k = C(2K-1, 2k-2) / 2^(2K-2),   z_k = C(2K-1, 2k-1) / 2^(2K-2)
//   f_{k,l,m} = alpha (2k-2) + beta m,  g_{k,l,m} = alpha (2k-1) + beta m
//
// for l <= Lbar and m <= M-1 (1-based), 1/M on the remaining variables, and
// the last state absorbing the remainder of each row. Both parameter sets have
// exactly Lbar strongly separable variables, lie in different label orbits,
// and generate the same mixture distribution. Everything here is exact.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixid/model.hpp"

namespace mixid {

struct CounterexampleSpec {
  int K = 2;
  int L = 2;
  int M = 2;
  int Lbar = 2;
  Rational alpha = make_rational(1, 48);
  Rational beta = make_rational(1, 48);

  friend bool operator==(const CounterexampleSpec&, const CounterexampleSpec&) = default;
};

struct CounterexamplePair {
  CounterexampleSpec spec;
  ExactParams F;
  ExactParams G;
};

Rational binomial(int n, int k);

// Even- and odd-indexed binomial weights of order 2K-1, each summing to 1.
std::pair<std::vector<Rational>, std::vector<Rational>> counterexample_weights(int K);

// True when every constructed frequency lies strictly inside (0, 1).
bool is_feasible(const CounterexampleSpec& spec);

// alpha = beta = 1 / (4 M (2K + M)), halved until feasible.
std::pair<Rational, Rational> default_scale(int K, int Lbar, int M);

// Requires K >= 2, 1 <= Lbar <= min(2K-2, L) and a feasible scale.
CounterexamplePair build_pair(const CounterexampleSpec& spec);

// Same pattern with Lbar anywhere in [0, L]. Lbar >= 2K-1 no longer yields
// equal distributions; used to probe sharpness.
CounterexamplePair build_pattern(const CounterexampleSpec& spec);

// Lbar = 0 family: components 1 and 2 share identical rows and split their
// joint weight differently between the two parameter sets.
CounterexamplePair build_trivial_pair(int K, int L, int M);

bool verify_equal_distribution(const CounterexamplePair& pair, const SizeCaps& caps = {});

// sum_{i=0}^{2K-1} C(2K-1, i) (-1)^i prod_{m in multipliers} (alpha i + beta m).
// `multipliers` are the 1-based state labels m. Vanishes whenever
// |multipliers| <= 2K-2.
Rational alternating_sum(int K, const Rational& alpha, const Rational& beta, std::span<const int> multipliers);

// The same sum as a homogeneous polynomial in (alpha, beta): entry j is the
// coefficient of alpha^j beta^(t-j), t = |multipliers|.
std::vector<Rational> alternating_sum_coefficients(int K, std::span<const int> multipliers);

struct Lemma4Sweep {
  bool premise = true;
  std::size_t assignments = 0;
  std::optional<std::vector<int>> first_failure;  // per-variable state, -1 = unassigned
};

// Moment agreement for every I within the first Lbar variables and every
// assignment over the first M-1 states.
Lemma4Sweep lemma4_premise_sweep(const CounterexamplePair& pair, const SizeCaps& caps = {});

// Premise sweep and, independently, the full tensor comparison.
bool lemma4_reduction_check(const CounterexamplePair& pair, const SizeCaps& caps = {});

struct AlternatingRow {
  int copies = 0;  // multiset is `copies` copies of state 1
  Rational value;
  Rational expected;
  bool ok = false;
};

struct VerificationReport {
  bool weights_normalized = false;
  bool distributions_equal = false;
  std::optional<std::vector<int>> first_differing_cell;
  bool orbits_distinct = false;
  int strong_F = 0, weak_F = 0, strong_G = 0, weak_G = 0;
  bool separability_matches = false;
  Lemma4Sweep lemma4;
  std::vector<AlternatingRow> alternating;
  bool alternating_ok = false;

  bool all_passed() const {
    return weights_normalized && distributions_equal && orbits_distinct && separability_matches && lemma4.premise &&
           alternating_ok;
  }
};

VerificationReport verify_pair(const CounterexamplePair& pair, const SizeCaps& caps = {});

}  // namespace mixid
