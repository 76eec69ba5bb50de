#pragma once

// Characteristic polynomial of a binary mixture,
//
//   C(x_1..x_L) = sum_k w_k prod_l (x_l - f_{k,l,0}),
//
// stored through its subset moments s_I = sum_k w_k prod_{l in I} f_{k,l,0}.
// The coefficient of prod_{l not in I} x_l is (-1)^{|I|} s_I, so two
// polynomials are identical exactly when their moment maps agree. Subsets are
// bitmasks with bit l standing for variable l.
//
// Also hosts the marginal-moment machinery used for general M.

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mixid/kernels.hpp"
#include "mixid/model.hpp"

namespace mixid {

using SubsetMask = std::uint32_t;

template <typename T>
class MultilinearPolynomial {
 public:
  MultilinearPolynomial(int L, std::vector<T> moments) : L_(L), moments_(std::move(moments)) {
    require(L >= 1 && L <= 31, "polynomial variable count out of range");
    require(moments_.size() == (std::size_t{1} << L), "moment map must have 2^L entries");
  }

  int L() const { return L_; }
  const T& moment(SubsetMask subset) const { return moments_.at(subset); }
  std::span<const T> moments() const { return moments_; }

  // Coefficient of the monomial prod_{l not in subset} x_l.
  T monomial_coefficient(SubsetMask subset) const {
    return (std::popcount(subset) % 2 == 0) ? T(moment(subset)) : T(-moment(subset));
  }

  friend bool operator==(const MultilinearPolynomial&, const MultilinearPolynomial&) = default;

 private:
  int L_;
  std::vector<T> moments_;
};

using ExactPolynomial = MultilinearPolynomial<Rational>;

namespace detail {

inline void require_poly_size(int L, const SizeCaps& caps) {
  if (L > caps.max_poly_vars) {
    throw ResourceCap("2^L coefficient map exceeds the cap of L <= " + std::to_string(caps.max_poly_vars));
  }
}

// Binary cell index of the outcome whose "state 0" variables are `subset`.
inline std::size_t binary_cell_of(SubsetMask subset, int L) {
  std::size_t cell = 0;
  for (int l = 0; l < L; ++l) cell = (cell << 1) | ((subset >> l) & 1u ? 0u : 1u);
  return cell;
}

}  // namespace detail

// s_I = sum_k w_k prod_{l in I} f_{k,l,0}. Any mode, relaxed included; s_empty
// is then the raw weight sum.
template <typename T>
MultilinearPolynomial<T> charpoly_from_params(const BasicMixtureParams<T>& p, const SizeCaps& caps = {}) {
  require(p.M() == 2, "characteristic polynomial needs a binary (M = 2) model");
  detail::require_poly_size(p.L(), caps);
  const int L = p.L();
  const std::size_t n = std::size_t{1} << L;
  std::vector<T> s(n, T(0));
  std::vector<T> prod(n);
  for (int k = 0; k < p.K(); ++k) {
    prod[0] = p.weight(k);
    for (std::size_t mask = 1; mask < n; ++mask) {
      const int low = std::countr_zero(static_cast<SubsetMask>(mask));
      prod[mask] = prod[mask & (mask - 1)] * p.freq(k, low, 0);
    }
    for (std::size_t mask = 0; mask < n; ++mask) s[mask] += prod[mask];
  }
  return {L, std::move(s)};
}

// s_I = total mass of outcomes whose state-0 set contains I (superset sums).
template <typename T>
MultilinearPolynomial<T> charpoly_from_distribution(const DistributionTensor<T>& t, const SizeCaps& caps = {}) {
  require(t.M() == 2, "characteristic polynomial needs a binary (M = 2) tensor");
  detail::require_poly_size(t.L(), caps);
  const int L = t.L();
  const std::ptrdiff_t n = std::ptrdiff_t{1} << L;
  std::vector<T> s(n);
  for (std::ptrdiff_t mask = 0; mask < n; ++mask) s[mask] = t[detail::binary_cell_of(static_cast<SubsetMask>(mask), L)];
  for (int l = 0; l < L; ++l) {
    const std::ptrdiff_t bit = std::ptrdiff_t{1} << l;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t mask = 0; mask < n; ++mask) {
      if (!(mask & bit)) s[mask] += s[mask | bit];
    }
  }
  return {L, std::move(s)};
}

template <typename T>
bool poly_identity(const MultilinearPolynomial<T>& a, const MultilinearPolynomial<T>& b) {
  require(a.L() == b.L(), "poly_identity: variable counts differ");
  return std::equal(a.moments().begin(), a.moments().end(), b.moments().begin());
}

// sum_I (-1)^{|I|} s_I prod_{l not in I} x_l.
template <typename T>
T evaluate_poly(const MultilinearPolynomial<T>& p, std::span<const T> x) {
  require(x.size() == static_cast<std::size_t>(p.L()), "evaluate_poly: point has wrong length");
  const SubsetMask full = (SubsetMask{1} << p.L()) - 1;
  const std::size_t n = std::size_t{1} << p.L();
  // xprod[J] = prod_{l in J} x_l, indexed by the complement of I.
  std::vector<T> xprod(n);
  xprod[0] = 1;
  for (std::size_t mask = 1; mask < n; ++mask) {
    const int low = std::countr_zero(static_cast<SubsetMask>(mask));
    xprod[mask] = xprod[mask & (mask - 1)] * x[low];
  }
  T total = 0;
  for (std::size_t mask = 0; mask < n; ++mask) total += p.monomial_coefficient(mask) * xprod[full & ~mask];
  return total;
}

// Inverse of charpoly_from_distribution: each binary cell is the alternating
// sum of s_I over supersets I of its state-0 set.
template <typename T>
DistributionTensor<T> reconstruct_binary_tensor(const MultilinearPolynomial<T>& p) {
  const int L = p.L();
  const std::ptrdiff_t n = std::ptrdiff_t{1} << L;
  std::vector<T> g(p.moments().begin(), p.moments().end());
  for (int l = 0; l < L; ++l) {
    const std::ptrdiff_t bit = std::ptrdiff_t{1} << l;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t mask = 0; mask < n; ++mask) {
      if (!(mask & bit)) g[mask] -= g[mask | bit];
    }
  }
  std::vector<T> cells(n);
  for (std::ptrdiff_t mask = 0; mask < n; ++mask) cells[detail::binary_cell_of(static_cast<SubsetMask>(mask), L)] = g[mask];
  return {2, L, std::move(cells)};
}

// Fixes a subset of variables to given states; the rest are marginalized.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::map<int, int> entries) : entries_(std::move(entries)) {}

  PartialAssignment& set(int variable, int state) {
    entries_[variable] = state;
    return *this;
  }
  const std::map<int, int>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void validate(int L, int M) const {
    for (auto [l, m] : entries_) {
      require(l >= 0 && l < L, "assignment variable out of range");
      require(m >= 0 && m < M, "assignment state out of range");
    }
  }

 private:
  std::map<int, int> entries_;
};

// Total mass of outcomes extending the assignment.
template <typename T>
T marginal_moment(const DistributionTensor<T>& t, const PartialAssignment& a) {
  a.validate(t.L(), t.M());
  const int L = t.L(), M = t.M();
  std::vector<int> fixed(L, -1);
  for (auto [l, m] : a.entries()) fixed[l] = m;
  std::vector<int> free_vars;
  for (int l = 0; l < L; ++l)
    if (fixed[l] < 0) free_vars.push_back(l);

  std::vector<int> digits(L);
  for (int l = 0; l < L; ++l) digits[l] = fixed[l] < 0 ? 0 : fixed[l];
  T total = 0;
  while (true) {
    total += t[t.index(digits)];
    std::size_t i = 0;
    for (; i < free_vars.size(); ++i) {
      int& d = digits[free_vars[free_vars.size() - 1 - i]];
      if (++d < M) break;
      d = 0;
    }
    if (i == free_vars.size()) break;
  }
  return total;
}

// sum_k w_k prod_{(l, m) in a} f_{k,l,m}; the empty product is 1.
template <typename T>
T moment_from_params(const BasicMixtureParams<T>& p, const PartialAssignment& a) {
  a.validate(p.L(), p.M());
  T total = 0;
  for (int k = 0; k < p.K(); ++k) {
    T term = p.weight(k);
    for (auto [l, m] : a.entries()) term *= p.freq(k, l, m);
    total += term;
  }
  return total;
}

}  // namespace mixid
