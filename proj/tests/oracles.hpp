#pragma once

// Independent reference computations for the tests. These deliberately use the
// most literal formula available (per-cell loops, direct sums) and share no
// code with the library kernels beyond the parameter containers.

#include <mixid/model.hpp>
#include <mixid/rational.hpp>

#include <cstdint>
#include <vector>

namespace oracle {

using mixid::ExactParams;
using mixid::ExactTensor;
using mixid::Rational;

inline Rational q(long p, long d) { return mixid::make_rational(p, d); }

// f(m) = sum_k w_k prod_l f_{k,l,m_l}, one cell at a time.
inline std::vector<Rational> mixture_cells(const ExactParams& p) {
  const int K = p.K(), L = p.L(), M = p.M();
  std::size_t n = 1;
  for (int l = 0; l < L; ++l) n *= M;
  std::vector<Rational> out(n);
  for (std::size_t cell = 0; cell < n; ++cell) {
    std::vector<int> m(L);
    std::size_t c = cell;
    for (int l = L - 1; l >= 0; --l) {
      m[l] = static_cast<int>(c % M);
      c /= M;
    }
    Rational total = 0;
    for (int k = 0; k < K; ++k) {
      Rational prod = p.weight(k);
      for (int l = 0; l < L; ++l) prod *= p.freq(k, l, m[l]);
      total += prod;
    }
    out[cell] = total;
  }
  return out;
}

// s_I = sum_k w_k prod_{l in I} f_{k,l,0}
inline Rational subset_moment(const ExactParams& p, std::uint32_t mask) {
  Rational total = 0;
  for (int k = 0; k < p.K(); ++k) {
    Rational prod = p.weight(k);
    for (int l = 0; l < p.L(); ++l)
      if (mask >> l & 1u) prod *= p.freq(k, l, 0);
    total += prod;
  }
  return total;
}

// sum_k w_k prod_l (x_l - f_{k,l,0})
inline Rational factored_charpoly(const ExactParams& p, const std::vector<Rational>& x) {
  Rational total = 0;
  for (int k = 0; k < p.K(); ++k) {
    Rational prod = p.weight(k);
    for (int l = 0; l < p.L(); ++l) prod *= x[l] - p.freq(k, l, 0);
    total += prod;
  }
  return total;
}

// Binary projection straight from the definition: outcome b gets the mass of
// every m with (m_l == sel_l) <=> (b_l == 0).
inline std::vector<Rational> project_cells(const std::vector<Rational>& cells, int M, int L,
                                           const std::vector<int>& sel) {
  std::vector<Rational> out(std::size_t{1} << L, Rational(0));
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    std::size_t c = cell, b = 0;
    std::vector<int> m(L);
    for (int l = L - 1; l >= 0; --l) {
      m[l] = static_cast<int>(c % M);
      c /= M;
    }
    for (int l = 0; l < L; ++l) b = b * 2 + (m[l] == sel[l] ? 0 : 1);
    out[b] += cells[cell];
  }
  return out;
}

// sum_{i=0}^{n} C(n,i) (-1)^i prod_j (alpha*i + beta*m_j), n = 2K-1, with
// binomials built by the multiplicative recurrence.
inline Rational alternating_sum(int K, const Rational& alpha, const Rational& beta, const std::vector<int>& ms) {
  const int n = 2 * K - 1;
  Rational total = 0, binom = 1;
  for (int i = 0; i <= n; ++i) {
    Rational prod = binom;
    for (int m : ms) prod *= alpha * i + beta * m;
    total += (i % 2 == 0) ? prod : Rational(-prod);
    binom = binom * (n - i) / (i + 1);
  }
  return total;
}

inline Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Rational power(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace oracle
