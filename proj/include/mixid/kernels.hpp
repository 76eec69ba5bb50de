#pragma once

// Mixture-distribution tensor kernels. `mixture_distribution` is the
// OpenMP-parallel production path; `mixture_distribution_serial` builds the
// same tensor by a different route (per-component Kronecker products) and is
// kept as the reference for tests and the benchmark.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mixid/model.hpp"

namespace mixid {

namespace detail {

template <typename T>
void require_distribution_semantics(const BasicMixtureParams<T>& p, const SizeCaps& caps) {
  require(p.mode() != Mode::relaxed, "relaxed-mode parameters have no mixture distribution");
  check_size_caps(p.K(), p.L(), p.M(), caps);
}

}  // namespace detail

// f(m_1..m_L) = sum_k w_k prod_l f_{k,l,m_l}, one independent cell per task.
template <typename T>
DistributionTensor<T> mixture_distribution(const BasicMixtureParams<T>& p, const SizeCaps& caps = {}) {
  detail::require_distribution_semantics(p, caps);
  const int K = p.K(), L = p.L(), M = p.M();
  const std::size_t cells = DistributionTensor<T>::cell_count(M, L);
  std::vector<T> out(cells);

  // Each thread walks a contiguous chunk of cells with an odometer and keeps
  // running prefix products, so a cell costs about K*M/(M-1) multiplications.
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cells);
#pragma omp parallel
  {
    std::ptrdiff_t begin = 0, end = n;
#ifdef _OPENMP
    const std::ptrdiff_t nt = omp_get_num_threads(), tid = omp_get_thread_num();
    begin = n * tid / nt;
    end = n * (tid + 1) / nt;
#endif
    if (begin < end) {
      std::vector<int> digits(L);
      std::size_t rest = static_cast<std::size_t>(begin);
      for (int l = L - 1; l >= 0; --l) {
        digits[l] = static_cast<int>(rest % M);
        rest /= M;
      }
      // prefix[k*(L+1) + l] = w_k * prod_{j<l} f(k, j, digits[j])
      std::vector<T> prefix(static_cast<std::size_t>(K) * (L + 1));
      auto refresh = [&](int from) {
        for (int k = 0; k < K; ++k) {
          T* row = prefix.data() + static_cast<std::size_t>(k) * (L + 1);
          if (from == 0) row[0] = p.weight(k);
          for (int l = from; l < L; ++l) row[l + 1] = row[l] * p.freq(k, l, digits[l]);
        }
      };
      refresh(0);
      T acc;
      for (std::ptrdiff_t c = begin; c < end; ++c) {
        acc = 0;
        for (int k = 0; k < K; ++k) acc += prefix[static_cast<std::size_t>(k) * (L + 1) + L];
        out[c] = acc;
        int l = L - 1;
        while (l >= 0 && ++digits[l] == M) digits[l--] = 0;
        if (l >= 0) refresh(l);
      }
    }
  }
  return {M, L, std::move(out)};
}

template <typename T>
DistributionTensor<T> mixture_distribution_serial(const BasicMixtureParams<T>& p, const SizeCaps& caps = {}) {
  detail::require_distribution_semantics(p, caps);
  const int K = p.K(), L = p.L(), M = p.M();
  std::vector<T> total(DistributionTensor<T>::cell_count(M, L), T(0));
  std::vector<T> prod, next;
  for (int k = 0; k < K; ++k) {
    prod.assign(1, p.weight(k));
    for (int l = 0; l < L; ++l) {
      next.assign(prod.size() * M, T(0));
      for (std::size_t i = 0; i < prod.size(); ++i)
        for (int m = 0; m < M; ++m) next[i * M + m] = prod[i] * p.freq(k, l, m);
      prod.swap(next);
    }
    for (std::size_t c = 0; c < total.size(); ++c) total[c] += prod[c];
  }
  return {M, L, std::move(total)};
}

template <typename T>
T tensor_sum(const DistributionTensor<T>& t) {
  T s = 0;
  for (const T& x : t.values()) s += x;
  return s;
}

// First cell where the tensors differ (exactly), or cells() when equal.
template <typename T>
std::size_t first_difference(const DistributionTensor<T>& a, const DistributionTensor<T>& b) {
  require(a.M() == b.M() && a.L() == b.L(), "tensor shape mismatch");
  for (std::size_t c = 0; c < a.size(); ++c)
    if (a[c] != b[c]) return c;
  return a.size();
}

// Max |a - b| over cells.
inline double max_abs_deviation(const FloatTensor& a, const FloatTensor& b) {
  require(a.M() == b.M() && a.L() == b.L(), "tensor shape mismatch");
  double worst = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) worst = std::max(worst, std::fabs(a[c] - b[c]));
  return worst;
}

}  // namespace mixid
