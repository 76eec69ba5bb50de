#include "mixid/counterexample.hpp"

#include "mixid/charpoly.hpp"
#include "mixid/kernels.hpp"
#include "mixid/separability.hpp"

namespace mixid {

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(c);
}

std::pair<std::vector<Rational>, std::vector<Rational>> counterexample_weights(int K) {
  require(K >= 1, "counterexample_weights: K must be >= 1");
  // Even and odd binomials of order 2K-1 each sum to 2^(2K-2).
  mpz_class denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(2 * K - 2));
  std::vector<Rational> w, z;
  for (int k = 1; k <= K; ++k) {
    Rational a = binomial(2 * K - 1, 2 * k - 2) / denom;
    Rational b = binomial(2 * K - 1, 2 * k - 1) / denom;
    a.canonicalize();
    b.canonicalize();
    w.push_back(a);
    z.push_back(b);
  }
  return {std::move(w), std::move(z)};
}

namespace {

void require_shape(const CounterexampleSpec& s) {
  require(s.K >= 2, "counterexample needs K >= 2");
  require(s.L >= 1, "counterexample needs L >= 1");
  require(s.M >= 2, "counterexample needs M >= 2");
  require(s.Lbar >= 0 && s.Lbar <= s.L, "Lbar must lie in [0, L]");
  require(s.alpha > 0 && s.beta > 0, "alpha and beta must be positive");
}

// Row for 1-based component offset `step` (2k-2 for F, 2k-1 for G).
std::vector<Rational> progression_row(int step, int M, const Rational& alpha, const Rational& beta) {
  std::vector<Rational> row(M);
  Rational used = 0;
  for (int m = 1; m <= M - 1; ++m) {
    row[m - 1] = alpha * step + beta * m;
    used += row[m - 1];
  }
  row[M - 1] = 1 - used;
  return row;
}

bool row_inside_open_unit(const std::vector<Rational>& row) {
  for (const auto& x : row)
    if (!(x > 0 && x < 1)) return false;
  return true;
}

ExactParams assemble(const CounterexampleSpec& s, std::vector<Rational> weights, int parity,
                     bool duplicate_first_two = false) {
  std::vector<Rational> f;
  f.reserve(static_cast<std::size_t>(s.K) * s.L * s.M);
  const Rational uniform = make_rational(1, s.M);
  for (int k = 1; k <= s.K; ++k) {
    const int kk = duplicate_first_two ? std::max(k, 2) : k;
    const auto prog = progression_row(2 * kk - 2 + parity, s.M, s.alpha, s.beta);
    for (int l = 1; l <= s.L; ++l) {
      if (l <= s.Lbar || duplicate_first_two) {
        f.insert(f.end(), prog.begin(), prog.end());
      } else {
        f.insert(f.end(), static_cast<std::size_t>(s.M), uniform);
      }
    }
  }
  return {s.K, s.L, s.M, std::move(f), std::move(weights), Mode::interior};
}

}  // namespace

bool is_feasible(const CounterexampleSpec& s) {
  if (s.K < 2 || s.M < 2 || !(s.alpha > 0) || !(s.beta > 0)) return false;
  for (int k = 1; k <= s.K; ++k) {
    for (int parity = 0; parity <= 1; ++parity) {
      if (!row_inside_open_unit(progression_row(2 * k - 2 + parity, s.M, s.alpha, s.beta))) return false;
    }
  }
  return true;
}

std::pair<Rational, Rational> default_scale(int K, int Lbar, int M) {
  require(K >= 2 && M >= 2 && Lbar >= 0, "default_scale: invalid K, Lbar or M");
  Rational a = make_rational(1, 4L * M * (2L * K + M));
  CounterexampleSpec probe{K, std::max(Lbar, 1), M, Lbar, a, a};
  while (!is_feasible(probe)) {
    probe.alpha /= 2;
    probe.beta /= 2;
  }
  return {probe.alpha, probe.beta};
}

CounterexamplePair build_pattern(const CounterexampleSpec& spec) {
  require_shape(spec);
  require(is_feasible(spec), "counterexample scale is infeasible: some frequency leaves (0, 1)");
  auto [w, z] = counterexample_weights(spec.K);
  return {spec, assemble(spec, std::move(w), 0), assemble(spec, std::move(z), 1)};
}

CounterexamplePair build_pair(const CounterexampleSpec& spec) {
  require_shape(spec);
  require(spec.Lbar >= 1 && spec.Lbar <= 2 * spec.K - 2,
          "Lbar must lie in [1, min(2K-2, L)]; use build_trivial_pair for Lbar = 0");
  return build_pattern(spec);
}

CounterexamplePair build_trivial_pair(int K, int L, int M) {
  auto [alpha, beta] = default_scale(K, 0, M);
  CounterexampleSpec spec{K, L, M, 0, alpha, beta};
  require_shape(spec);
  std::vector<Rational> w(K, make_rational(1, K));
  std::vector<Rational> z = w;
  z[0] = make_rational(1, 2L * K);
  z[1] = make_rational(3, 2L * K);
  // Both sets use the same rows; only the weight split of the twin components differs.
  return {spec, assemble(spec, std::move(w), 0, true), assemble(spec, std::move(z), 0, true)};
}

bool verify_equal_distribution(const CounterexamplePair& pair, const SizeCaps& caps) {
  const auto f = mixture_distribution(pair.F, caps);
  const auto g = mixture_distribution(pair.G, caps);
  return first_difference(f, g) == f.size();
}

Rational alternating_sum(int K, const Rational& alpha, const Rational& beta, std::span<const int> multipliers) {
  require(K >= 1, "alternating_sum: K must be >= 1");
  const int n = 2 * K - 1;
  Rational total = 0;
  for (int i = 0; i <= n; ++i) {
    Rational term = binomial(n, i);
    if (i % 2) term = -term;
    for (int m : multipliers) term *= alpha * i + beta * m;
    total += term;
  }
  return total;
}

std::vector<Rational> alternating_sum_coefficients(int K, std::span<const int> multipliers) {
  require(K >= 1, "alternating_sum_coefficients: K must be >= 1");
  const int n = 2 * K - 1;
  const std::size_t t = multipliers.size();
  std::vector<Rational> total(t + 1, Rational(0));
  for (int i = 0; i <= n; ++i) {
    // prod (i alpha + m beta), coefficient j on alpha^j beta^(t-j).
    std::vector<Rational> poly{Rational(1)};
    for (int m : multipliers) {
      std::vector<Rational> next(poly.size() + 1, Rational(0));
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j] * i;
        next[j] += poly[j] * m;
      }
      poly.swap(next);
    }
    Rational c = binomial(n, i);
    if (i % 2) c = -c;
    for (std::size_t j = 0; j <= t; ++j) total[j] += c * poly[j];
  }
  return total;
}

Lemma4Sweep lemma4_premise_sweep(const CounterexamplePair& pair, const SizeCaps& caps) {
  const auto& s = pair.spec;
  check_size_caps(1, std::max(s.Lbar, 1), s.M, caps);
  Lemma4Sweep out;
  // Each of the first Lbar variables is unassigned (-1) or in states 0..M-2.
  std::vector<int> code(s.Lbar, -1);
  while (true) {
    PartialAssignment a;
    for (int l = 0; l < s.Lbar; ++l)
      if (code[l] >= 0) a.set(l, code[l]);
    ++out.assignments;
    if (moment_from_params(pair.F, a) != moment_from_params(pair.G, a)) {
      out.premise = false;
      if (!out.first_failure) out.first_failure = code;
    }
    int l = s.Lbar - 1;
    for (; l >= 0; --l) {
      if (++code[l] <= s.M - 2) break;
      code[l] = -1;
    }
    if (l < 0) break;
  }
  return out;
}

bool lemma4_reduction_check(const CounterexamplePair& pair, const SizeCaps& caps) {
  const bool premise = lemma4_premise_sweep(pair, caps).premise;
  const bool conclusion = verify_equal_distribution(pair, caps);
  return premise && conclusion;
}

VerificationReport verify_pair(const CounterexamplePair& pair, const SizeCaps& caps) {
  VerificationReport r;
  const auto& s = pair.spec;

  Rational sw = 0, sz = 0;
  for (const auto& x : pair.F.weights()) sw += x;
  for (const auto& x : pair.G.weights()) sz += x;
  r.weights_normalized = sw == 1 && sz == 1;

  const auto f = mixture_distribution(pair.F, caps);
  const auto g = mixture_distribution(pair.G, caps);
  const auto diff = first_difference(f, g);
  r.distributions_equal = diff == f.size();
  if (!r.distributions_equal) r.first_differing_cell = f.states(diff);

  r.orbits_distinct = !orbit_equal(pair.F, pair.G, 0.0).has_value();

  r.strong_F = static_cast<int>(strong_separability(pair.F).size());
  r.weak_F = static_cast<int>(weak_separability(pair.F).size());
  r.strong_G = static_cast<int>(strong_separability(pair.G).size());
  r.weak_G = static_cast<int>(weak_separability(pair.G).size());
  r.separability_matches = r.strong_F == s.Lbar && r.weak_F == s.Lbar && r.strong_G == s.Lbar && r.weak_G == s.Lbar;

  r.lemma4 = lemma4_premise_sweep(pair, caps);

  // t copies of state 1: zero below 2K-1, -(2K-1)! alpha^(2K-1) at 2K-1.
  const int n = 2 * s.K - 1;
  r.alternating_ok = true;
  for (int t = 0; t <= n; ++t) {
    AlternatingRow row;
    row.copies = t;
    const std::vector<int> ones(t, 1);
    row.value = alternating_sum(s.K, s.alpha, s.beta, ones);
    if (t == n) {
      mpz_class fact;
      mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
      Rational apow = 1;
      for (int i = 0; i < n; ++i) apow *= s.alpha;
      row.expected = -Rational(fact) * apow;
    } else {
      row.expected = 0;
    }
    row.ok = row.value == row.expected;
    r.alternating_ok = r.alternating_ok && row.ok;
    r.alternating.push_back(std::move(row));
  }
  return r;
}

}  // namespace mixid
