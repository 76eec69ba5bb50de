#pragma once

// Binary auxiliary models: every variable l is collapsed onto "state sel(l)"
// versus "any other state". Parameter-side and distribution-side projections
// commute, which is what carries binary identity results over to general M.

#include <map>
#include <vector>

#include "mixid/charpoly.hpp"
#include "mixid/kernels.hpp"
#include "mixid/model.hpp"
#include "mixid/separability.hpp"

namespace mixid {

class StateSelector {
 public:
  explicit StateSelector(std::vector<int> states) : states_(std::move(states)) {}

  // Every variable projected on state 0.
  static StateSelector uniform(int L, int state = 0) { return StateSelector(std::vector<int>(L, state)); }

  // State 0 everywhere except `variable`, which uses `state`.
  static StateSelector reselect(int L, int variable, int state) {
    std::vector<int> s(L, 0);
    require(variable >= 0 && variable < L, "reselect: variable out of range");
    s[variable] = state;
    return StateSelector(std::move(s));
  }

  // Weakly separable variables take their witness state, others state 0.
  template <typename T>
  static StateSelector from_witnesses(const BasicMixtureParams<T>& p) {
    std::vector<int> s(p.L(), 0);
    for (auto [l, m] : weak_separability(p)) s[l] = m;
    return StateSelector(std::move(s));
  }

  int L() const { return static_cast<int>(states_.size()); }
  int operator()(int l) const { return states_[l]; }
  std::span<const int> states() const { return states_; }

  void validate(int L, int M) const {
    require(static_cast<int>(states_.size()) == L, "selector length != L");
    for (int s : states_) require(s >= 0 && s < M, "selector state out of range");
  }

 private:
  std::vector<int> states_;
};

template <typename T>
BasicMixtureParams<T> project_params(const BasicMixtureParams<T>& p, const StateSelector& sel) {
  sel.validate(p.L(), p.M());
  std::vector<T> f;
  f.reserve(static_cast<std::size_t>(p.K()) * p.L() * 2);
  for (int k = 0; k < p.K(); ++k) {
    for (int l = 0; l < p.L(); ++l) {
      const T& x = p.freq(k, l, sel(l));
      f.push_back(x);
      f.push_back(T(1) - x);
    }
  }
  std::vector<T> w(p.weights().begin(), p.weights().end());
  return {p.K(), p.L(), 2, std::move(f), std::move(w), p.mode()};
}

// Binary outcome b gets the mass of all outcomes m with (m_l == sel(l)) <=> (b_l == 0).
template <typename T>
DistributionTensor<T> project_distribution(const DistributionTensor<T>& t, const StateSelector& sel) {
  sel.validate(t.L(), t.M());
  const int L = t.L(), M = t.M();
  std::vector<T> out(DistributionTensor<T>::cell_count(2, L), T(0));
  std::vector<int> digits(L, 0);
  for (std::size_t c = 0; c < t.size(); ++c) {
    std::size_t b = 0;
    for (int l = 0; l < L; ++l) b = (b << 1) | (digits[l] == sel(l) ? 0u : 1u);
    out[b] += t[c];
    for (int l = L - 1; l >= 0; --l) {
      if (++digits[l] < M) break;
      digits[l] = 0;
    }
  }
  return {2, L, std::move(out)};
}

// Given two parameter sets with equal distributions, their projected
// characteristic polynomials must coincide. The equal-distribution hypothesis
// is checked here, exactly, and a violation throws HypothesisViolation.
inline bool projection_charpoly_check(const ExactParams& a, const ExactParams& b, const StateSelector& sel,
                                      const SizeCaps& caps = {}) {
  require(a.K() == b.K() && a.L() == b.L() && a.M() == b.M(), "projection_charpoly_check: dimension mismatch");
  sel.validate(a.L(), a.M());
  const auto fa = mixture_distribution(a, caps);
  const auto fb = mixture_distribution(b, caps);
  if (first_difference(fa, fb) != fa.size()) {
    throw HypothesisViolation("projection_charpoly_check: mixture distributions differ");
  }
  return poly_identity(charpoly_from_params(project_params(a, sel), caps),
                       charpoly_from_params(project_params(b, sel), caps));
}

}  // namespace mixid
