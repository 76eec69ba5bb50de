#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "mixid/model.hpp"

namespace mixid {

namespace detail {

template <typename T>
bool pairwise_distinct_in_state(const BasicMixtureParams<T>& p, int l, int m) {
  for (int a = 0; a < p.K(); ++a)
    for (int b = a + 1; b < p.K(); ++b)
      if (p.freq(a, l, m) == p.freq(b, l, m)) return false;
  return true;
}

}  // namespace detail

// Variables whose frequencies differ between every pair of components in
// every state. Computed over all K declared components, zero weights included.
template <typename T>
std::vector<int> strong_separability(const BasicMixtureParams<T>& p) {
  std::vector<int> out;
  for (int l = 0; l < p.L(); ++l) {
    bool all = true;
    for (int m = 0; all && m < p.M(); ++m) all = detail::pairwise_distinct_in_state(p, l, m);
    if (all) out.push_back(l);
  }
  return out;
}

// Variable -> smallest witness state in which the K frequencies are pairwise
// distinct. Variables without a witness are absent.
template <typename T>
std::map<int, int> weak_separability(const BasicMixtureParams<T>& p) {
  std::map<int, int> out;
  for (int l = 0; l < p.L(); ++l) {
    for (int m = 0; m < p.M(); ++m) {
      if (detail::pairwise_distinct_in_state(p, l, m)) {
        out.emplace(l, m);
        break;
      }
    }
  }
  return out;
}

// THM1_STRONG: at least 2K-1 strongly separable variables.
// THM2_WEAK:   otherwise, at least 2K weakly separable variables.
// NO_GUARANTEE does not claim non-identifiability.
enum class Verdict { thm1_strong, thm2_weak, no_guarantee };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::thm1_strong: return "THM1_STRONG";
    case Verdict::thm2_weak: return "THM2_WEAK";
    case Verdict::no_guarantee: return "NO_GUARANTEE";
  }
  return "?";
}

template <typename T>
Verdict theorem_guarantee(const BasicMixtureParams<T>& p) {
  require(p.mode() == Mode::interior, "theorem_guarantee requires interior-mode parameters");
  const int K = p.K();
  if (static_cast<int>(strong_separability(p).size()) >= 2 * K - 1) return Verdict::thm1_strong;
  if (static_cast<int>(weak_separability(p).size()) >= 2 * K) return Verdict::thm2_weak;
  return Verdict::no_guarantee;
}

}  // namespace mixid
