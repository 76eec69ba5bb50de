#include <doctest.h>

#include <mixid/charpoly.hpp>
#include <mixid/counterexample.hpp>
#include <mixid/kernels.hpp>
#include <mixid/separability.hpp>

#include "oracles.hpp"

using namespace mixid;
using oracle::q;

TEST_CASE("binomial weights") {
  auto [w, z] = counterexample_weights(2);
  CHECK(w == std::vector<Rational>{q(1, 4), q(3, 4)});
  CHECK(z == std::vector<Rational>{q(3, 4), q(1, 4)});
  for (int K = 2; K <= 6; ++K) {
    auto [wk, zk] = counterexample_weights(K);
    Rational sw = 0, sz = 0;
    for (int k = 0; k < K; ++k) {
      sw += wk[k];
      sz += zk[k];
    }
    CHECK(sw == 1);
    CHECK(sz == 1);
  }
  CHECK(binomial(7, 3) == 35);
}

TEST_CASE("default scale") {
  auto [a, b] = default_scale(2, 2, 2);
  CHECK(a == q(1, 48));
  CHECK(b == q(1, 48));
  for (int K = 2; K <= 5; ++K)
    for (int M = 2; M <= 5; ++M) {
      auto [alpha, beta] = default_scale(K, 2 * K - 2, M);
      CHECK(alpha > 0);
      CHECK(is_feasible(CounterexampleSpec{K, 2 * K - 2, M, 2 * K - 2, alpha, beta}));
    }
}

TEST_CASE("hand-checked K=2 instance") {
  CounterexampleSpec spec{2, 2, 2, 2, q(1, 16), q(1, 16)};
  auto pair = build_pair(spec);
  CHECK(pair.F.freq(0, 0, 0) == q(1, 16));
  CHECK(pair.F.freq(1, 0, 0) == q(3, 16));
  CHECK(pair.G.freq(0, 0, 0) == q(2, 16));
  CHECK(pair.G.freq(1, 1, 0) == q(4, 16));
  CHECK(verify_equal_distribution(pair));

  // single and pair moments under the corrected weights
  const Rational a = spec.alpha, b = spec.beta;
  CHECK(moment_from_params(pair.F, PartialAssignment(std::map<int, int>{{0, 0}})) == b + 3 * a / 2);
  CHECK(moment_from_params(pair.G, PartialAssignment(std::map<int, int>{{1, 0}})) == b + 3 * a / 2);
  CHECK(moment_from_params(pair.F, PartialAssignment(std::map<int, int>{{0, 0}, {1, 0}})) == b * b + 3 * a * a + 3 * a * b);
}

TEST_CASE("K=2, M=3, L=3") {
  CounterexampleSpec spec{2, 3, 3, 2, 0, 0};
  std::tie(spec.alpha, spec.beta) = default_scale(2, 2, 3);
  auto pair = build_pair(spec);
  CHECK(verify_equal_distribution(pair));
  CHECK(lemma4_reduction_check(pair));
  auto sweep = lemma4_premise_sweep(pair);
  CHECK(sweep.premise);
  CHECK(sweep.assignments == 9u);

  // tail variable identical across components
  CHECK(pair.F.freq(0, 2, 0) == q(1, 3));
  CHECK(pair.F.freq(1, 2, 2) == q(1, 3));
  CHECK(weak_separability(pair.F).count(2) == 0);
}

TEST_CASE("singleton moments agree") {
  for (int K = 2; K <= 4; ++K) {
    const int M = 3;
    CounterexampleSpec spec{K, 2, M, 2, 0, 0};
    std::tie(spec.alpha, spec.beta) = default_scale(K, 2, M);
    auto pair = build_pair(spec);
    for (int m = 0; m < M - 1; ++m) {
      // beta*(m+1) + alpha*(2K-1)/2 in 1-based terms
      const Rational expected = spec.beta * (m + 1) + spec.alpha * (2 * K - 1) / 2;
      CHECK(moment_from_params(pair.F, PartialAssignment(std::map<int, int>{{0, m}})) == expected);
      CHECK(moment_from_params(pair.G, PartialAssignment(std::map<int, int>{{0, m}})) == expected);
    }
  }
}

TEST_CASE("tampered pattern one variable too far") {
  for (int K = 2; K <= 3; ++K) {
    CounterexampleSpec spec{K, 2 * K - 1, 2, 2 * K - 1, 0, 0};
    std::tie(spec.alpha, spec.beta) = default_scale(K, 2 * K - 1, 2);
    auto pair = build_pattern(spec);
    CHECK_FALSE(verify_equal_distribution(pair));
    auto report = verify_pair(pair);
    CHECK_FALSE(report.all_passed());
    CHECK(report.first_differing_cell.has_value());
    CHECK_THROWS_AS(build_pair(spec), InvalidInput);
  }
}

TEST_CASE("infeasible scale is rejected") {
  CounterexampleSpec spec{2, 2, 2, 2, q(1, 2), q(1, 2)};
  CHECK_FALSE(is_feasible(spec));
  CHECK_THROWS_AS(build_pair(spec), InvalidInput);
}

TEST_CASE("alternating sum: examples and oracle") {
  const Rational one = 1;
  const int s1[] = {1}, s12[] = {1, 2}, s111[] = {1, 1, 1};
  CHECK(alternating_sum(2, one, one, s1) == 0);
  CHECK(alternating_sum(2, one, one, s12) == 0);
  CHECK(alternating_sum(2, one, one, s111) == -6);

  const std::vector<std::vector<int>> sets = {{}, {2}, {1, 3}, {3, 3, 1}, {1, 2, 3, 1}, {2, 2, 2, 2, 2}};
  for (int K = 2; K <= 5; ++K)
    for (const auto& s : sets) {
      const Rational a = q(3, 7), b = q(-5, 11);
      CHECK(alternating_sum(K, a, b, s) == oracle::alternating_sum(K, a, b, s));
      if (static_cast<int>(s.size()) <= 2 * K - 2) CHECK(alternating_sum(K, a, b, s) == 0);
    }
}

TEST_CASE("alternating sum: coefficient form") {
  for (int K = 2; K <= 4; ++K) {
    std::vector<int> ones(2 * K - 1, 1);
    auto c = alternating_sum_coefficients(K, ones);
    REQUIRE(c.size() == static_cast<std::size_t>(2 * K));
    for (int j = 0; j < 2 * K - 1; ++j) CHECK(c[j] == 0);
    CHECK(c[2 * K - 1] == -oracle::factorial(2 * K - 1));

    std::vector<int> short_set(2 * K - 2, 2);
    for (const auto& x : alternating_sum_coefficients(K, short_set)) CHECK(x == 0);
  }
}

TEST_CASE("verification report on the family") {
  for (int K = 2; K <= 3; ++K)
    for (int Lbar = 1; Lbar <= 2 * K - 2; ++Lbar) {
      CounterexampleSpec spec{K, Lbar + 1, 2, Lbar, 0, 0};
      std::tie(spec.alpha, spec.beta) = default_scale(K, Lbar, 2);
      auto report = verify_pair(build_pair(spec));
      CHECK(report.all_passed());
      CHECK(report.strong_F == Lbar);
      CHECK(report.weak_G == Lbar);
      if (Lbar == 2 * K - 2) CHECK(theorem_guarantee(build_pair(spec).F) == Verdict::no_guarantee);
    }
}

TEST_CASE("scale invariance") {
  const Rational scales[] = {q(1, 100), q(1, 73), q(2, 301)};
  for (const auto& a : scales)
    for (const auto& b : scales) {
      CounterexampleSpec spec{3, 5, 3, 4, a, b};
      if (!is_feasible(spec)) continue;
      CHECK(verify_equal_distribution(build_pair(spec)));
    }
}

TEST_CASE("trivial Lbar = 0 pair") {
  auto pair = build_trivial_pair(3, 2, 3);
  CHECK(verify_equal_distribution(pair));
  CHECK_FALSE(orbit_equal(pair.F, pair.G));
  CHECK(strong_separability(pair.F).empty());
  CHECK(pair.spec.Lbar == 0);
}
