#include <doctest.h>

#include <mixid/charpoly.hpp>
#include <mixid/counterexample.hpp>
#include <mixid/kernels.hpp>
#include <mixid/random_model.hpp>
#include <mixid/rng.hpp>

#include "oracles.hpp"

using namespace mixid;
using oracle::q;

TEST_CASE("charpoly: closed forms") {
  ExactParams p(2, 1, 2, {q(1, 4), q(3, 4), q(3, 4), q(1, 4)}, {q(1, 2), q(1, 2)}, Mode::interior);
  auto c = charpoly_from_params(p);
  CHECK(c.moment(0) == 1);
  CHECK(c.moment(1) == q(1, 2));
  CHECK(c.monomial_coefficient(1) == q(-1, 2));

  ExactTensor uniform(2, 3, std::vector<Rational>(8, q(1, 8)));
  auto u = charpoly_from_distribution(uniform);
  for (SubsetMask I = 0; I < 8; ++I) CHECK(u.moment(I) == oracle::power(q(1, 2), std::popcount(I)));

  std::vector<Rational> point(8, Rational(0));
  point[0] = 1;  // every variable in state 0
  auto pt = charpoly_from_distribution(ExactTensor(2, 3, point));
  for (SubsetMask I = 0; I < 8; ++I) CHECK(pt.moment(I) == 1);

  CHECK_THROWS_AS(charpoly_from_distribution(ExactTensor(3, 1, {q(1, 3), q(1, 3), q(1, 3)})), InvalidInput);
}

TEST_CASE("charpoly_from_params matches the subset-product oracle") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_rational_params(3, 4, 2, rng);
    auto c = charpoly_from_params(p);
    for (SubsetMask I = 0; I < 16; ++I) CHECK(c.moment(I) == oracle::subset_moment(p, I));
  }
}

TEST_CASE("relaxed params are first-class") {
  ExactParams r(2, 2, 2, {q(1, 3), q(2, 3), q(1, 2), q(1, 2), q(1, 5), q(4, 5), q(1, 7), q(6, 7)},
                {q(-2, 1), q(5, 1)}, Mode::relaxed);
  auto c = charpoly_from_params(r);
  CHECK(c.moment(0) == 3);
  for (SubsetMask I = 0; I < 4; ++I) CHECK(c.moment(I) == oracle::subset_moment(r, I));
}

TEST_CASE("property: distribution round trip and permutation identity") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 1 + trial % 3, L = 1 + trial % 6;
    auto p = random_rational_params(K, L, 2, rng);
    auto from_params = charpoly_from_params(p);
    CHECK(charpoly_from_distribution(mixture_distribution(p)) == from_params);
    std::vector<int> rev(K);
    for (int k = 0; k < K; ++k) rev[k] = K - 1 - k;
    CHECK(poly_identity(from_params, charpoly_from_params(apply_permutation(p, ComponentPermutation(rev)))));
  }
}

TEST_CASE("poly_identity") {
  Rng rng(47);
  auto a = charpoly_from_params(random_rational_params(2, 3, 2, rng));
  auto b = charpoly_from_params(random_rational_params(2, 3, 2, rng));
  CHECK(poly_identity(a, a));
  CHECK_FALSE(poly_identity(a, b));
  CHECK_THROWS_AS(poly_identity(a, charpoly_from_params(random_rational_params(2, 2, 2, rng))), InvalidInput);

  auto pair = build_pair(CounterexampleSpec{});
  CHECK(poly_identity(charpoly_from_params(pair.F), charpoly_from_params(pair.G)));
  CHECK_FALSE(orbit_equal(pair.F, pair.G));
}

TEST_CASE("evaluate_poly") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_rational_params(3, 4, 2, rng);
    auto c = charpoly_from_params(p);
    std::vector<Rational> x;
    for (int l = 0; l < 4; ++l) x.push_back(q(static_cast<long>(rng.range(-9, 9)), static_cast<long>(rng.range(1, 7))));
    CHECK(evaluate_poly<Rational>(c, x) == oracle::factored_charpoly(p, x));

    std::vector<Rational> ones(4, Rational(1));
    const std::vector<int> last(4, 1);
    CHECK(evaluate_poly<Rational>(c, ones) == mixture_distribution(p)[mixture_distribution(p).index(last)]);
  }

  auto single = random_rational_params(1, 3, 2, rng);
  std::vector<Rational> root = {q(5, 1), single.freq(0, 1, 0), q(-2, 3)};
  CHECK(evaluate_poly<Rational>(charpoly_from_params(single), root) == 0);

  std::vector<Rational> s(8, Rational(0));
  s[0] = 1;
  std::vector<Rational> x = {q(2, 1), q(3, 1), q(5, 7)};
  CHECK(evaluate_poly<Rational>(ExactPolynomial(3, s), x) == q(30, 7));
  CHECK_THROWS_AS(evaluate_poly<Rational>(ExactPolynomial(3, s), std::vector<Rational>(2)), InvalidInput);
}

TEST_CASE("inclusion-exclusion reconstruction") {
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_rational_params(2, 1 + trial % 5, 2, rng);
    auto t = mixture_distribution(p);
    auto cells = oracle::mixture_cells(p);
    auto back = reconstruct_binary_tensor(charpoly_from_params(p));
    CHECK(std::equal(cells.begin(), cells.end(), back.values().begin()));
    CHECK(back == t);
  }
}

TEST_CASE("marginal moments") {
  Rng rng(61);
  auto p = random_rational_params(3, 3, 3, rng);
  auto t = mixture_distribution(p);
  CHECK(marginal_moment(t, PartialAssignment{}) == 1);
  CHECK(moment_from_params(p, PartialAssignment{}) == 1);
  PartialAssignment full({{0, 2}, {1, 0}, {2, 1}});
  const std::vector<int> s = {2, 0, 1};
  CHECK(marginal_moment(t, full) == t[t.index(s)]);
  CHECK_THROWS_AS(marginal_moment(t, PartialAssignment(std::map<int, int>{{0, 3}})), InvalidInput);
  CHECK_THROWS_AS(moment_from_params(p, PartialAssignment(std::map<int, int>{{5, 0}})), InvalidInput);

  auto single = random_rational_params(1, 3, 3, rng);
  PartialAssignment a({{0, 1}, {2, 2}});
  CHECK(moment_from_params(single, a) == single.freq(0, 0, 1) * single.freq(0, 2, 2));

  for (int trial = 0; trial < 20; ++trial) {
    PartialAssignment r;
    for (int l = 0; l < 3; ++l)
      if (rng.below(2)) r.set(l, static_cast<int>(rng.below(3)));
    // direct oracle over the per-cell tensor
    auto cells = oracle::mixture_cells(p);
    Rational expected = 0;
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
      auto st = t.states(cell);
      bool ok = true;
      for (auto [l, m] : r.entries()) ok = ok && st[l] == m;
      if (ok) expected += cells[cell];
    }
    CHECK(marginal_moment(t, r) == expected);
    CHECK(moment_from_params(p, r) == expected);
  }
}

TEST_CASE("charpoly respects the variable cap") {
  ExactTensor t(2, 3, std::vector<Rational>(8, q(1, 8)));
  SizeCaps caps;
  caps.max_poly_vars = 2;
  CHECK_THROWS_AS(charpoly_from_distribution(t, caps), ResourceCap);
}
