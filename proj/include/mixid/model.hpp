#pragma once

// Mixture-of-product-measures parameters, the distribution tensor they
// generate, and label-permutation equivalence.
//
// States are 0-based throughout the code and in serialized files; state 0
// here is "state 1" in the usual mathematical write-up.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mixid/error.hpp"
#include "mixid/rational.hpp"

namespace mixid {

// interior: all weights and frequencies strictly positive, sums one.
// closure:  zeros allowed.
// relaxed:  weights nonzero (any sign), their sum unconstrained.
enum class Mode { interior, closure, relaxed };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

inline std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::interior: return "interior";
    case Mode::closure: return "closure";
    case Mode::relaxed: return "relaxed";
  }
  return "?";
}

inline Mode parse_mode(std::string_view text) {
  if (text == "interior") return Mode::interior;
  if (text == "closure") return Mode::closure;
  if (text == "relaxed") return Mode::relaxed;
  throw InvalidInput("unknown mode '" + std::string(text) + "'");
}

// Checks one pmf over M states against the frequency rules of `mode`.
// Relaxed mode constrains only weights, so its rows follow closure rules.
template <typename T>
void validate_frequency_vector(std::span<const T> row, Mode mode) {
  require(row.size() >= 2, "frequency vector needs at least 2 states");
  T sum = 0;
  for (const T& x : row) {
    if (mode == Mode::interior) {
      require(x > 0, "interior frequency vector has a non-positive entry");
    } else {
      require(x >= 0, "frequency vector has a negative entry");
    }
    if constexpr (ScalarTraits<T>::exact) {
      require(x <= 1, "frequency entry exceeds 1");
    } else {
      require(x <= 1.0 + 1e-12, "frequency entry exceeds 1");
    }
    sum += x;
  }
  require(ScalarTraits<T>::sums_to_one(sum), "frequency vector does not sum to 1");
}

template <typename T>
class BasicMixtureParams {
 public:
  // `freqs` is K*L*M, component-major then variable then state.
  BasicMixtureParams(int K, int L, int M, std::vector<T> freqs, std::vector<T> weights, Mode mode)
      : K_(K), L_(L), M_(M), mode_(mode), freqs_(std::move(freqs)), weights_(std::move(weights)) {
    validate();
  }

  int K() const { return K_; }
  int L() const { return L_; }
  int M() const { return M_; }
  Mode mode() const { return mode_; }

  const T& freq(int k, int l, int m) const { return freqs_[offset(k, l) + m]; }
  std::span<const T> row(int k, int l) const { return {freqs_.data() + offset(k, l), static_cast<std::size_t>(M_)}; }
  const T& weight(int k) const { return weights_[k]; }
  std::span<const T> weights() const { return weights_; }
  std::span<const T> frequencies() const { return freqs_; }

  // Revalidates under the new mode.
  BasicMixtureParams with_mode(Mode mode) const { return {K_, L_, M_, freqs_, weights_, mode}; }

  friend bool operator==(const BasicMixtureParams&, const BasicMixtureParams&) = default;

 private:
  std::size_t offset(int k, int l) const {
    return (static_cast<std::size_t>(k) * L_ + static_cast<std::size_t>(l)) * M_;
  }

  void validate() const {
    require(K_ >= 1, "K must be >= 1");
    require(L_ >= 1, "L must be >= 1");
    require(M_ >= 2, "M must be >= 2");
    require(freqs_.size() == static_cast<std::size_t>(K_) * L_ * M_, "frequency array size != K*L*M");
    require(weights_.size() == static_cast<std::size_t>(K_), "weight vector size != K");
    for (int k = 0; k < K_; ++k)
      for (int l = 0; l < L_; ++l) validate_frequency_vector<T>(row(k, l), mode_);
    T sum = 0;
    for (const T& w : weights_) {
      switch (mode_) {
        case Mode::interior: require(w > 0, "interior weights must be > 0"); break;
        case Mode::closure: require(w >= 0, "closure weights must be >= 0"); break;
        case Mode::relaxed: require(w != 0, "relaxed weights must be nonzero"); break;
      }
      sum += w;
    }
    if (mode_ != Mode::relaxed) require(ScalarTraits<T>::sums_to_one(sum), "weights do not sum to 1");
  }

  int K_, L_, M_;
  Mode mode_;
  std::vector<T> freqs_;
  std::vector<T> weights_;
};

using ExactParams = BasicMixtureParams<Rational>;
using FloatParams = BasicMixtureParams<double>;

// Values over [M]^L, row-major with the first variable slowest.
template <typename T>
class DistributionTensor {
 public:
  DistributionTensor(int M, int L, std::vector<T> values) : M_(M), L_(L), values_(std::move(values)) {
    require(M >= 2 && L >= 1, "tensor needs M >= 2 and L >= 1");
    require(values_.size() == cell_count(M, L), "tensor value count != M^L");
  }

  static std::size_t cell_count(int M, int L) {
    std::size_t n = 1;
    for (int l = 0; l < L; ++l) n *= static_cast<std::size_t>(M);
    return n;
  }

  int M() const { return M_; }
  int L() const { return L_; }
  std::size_t size() const { return values_.size(); }
  const T& operator[](std::size_t cell) const { return values_[cell]; }
  std::span<const T> values() const { return values_; }

  std::size_t index(std::span<const int> states) const {
    require(states.size() == static_cast<std::size_t>(L_), "state tuple length != L");
    std::size_t idx = 0;
    for (int s : states) {
      require(s >= 0 && s < M_, "state out of range");
      idx = idx * M_ + static_cast<std::size_t>(s);
    }
    return idx;
  }

  std::vector<int> states(std::size_t cell) const {
    std::vector<int> out(L_);
    for (int l = L_ - 1; l >= 0; --l) {
      out[l] = static_cast<int>(cell % M_);
      cell /= M_;
    }
    return out;
  }

  friend bool operator==(const DistributionTensor&, const DistributionTensor&) = default;

 private:
  int M_, L_;
  std::vector<T> values_;
};

using ExactTensor = DistributionTensor<Rational>;
using FloatTensor = DistributionTensor<double>;

inline void check_size_caps(int K, int L, int M, const SizeCaps& caps) {
  std::size_t cells = 1;
  for (int l = 0; l < L; ++l) {
    if (cells > caps.max_cells / static_cast<std::size_t>(M)) {
      throw ResourceCap("M^L exceeds the cell cap of " + std::to_string(caps.max_cells));
    }
    cells *= static_cast<std::size_t>(M);
  }
  if (cells > caps.max_cells) throw ResourceCap("M^L exceeds the cell cap of " + std::to_string(caps.max_cells));
  if (cells > caps.max_work / static_cast<std::size_t>(K)) {
    throw ResourceCap("K*M^L exceeds the work cap of " + std::to_string(caps.max_work));
  }
}

class ComponentPermutation {
 public:
  explicit ComponentPermutation(std::vector<int> mapping) : map_(std::move(mapping)) {
    std::vector<bool> seen(map_.size(), false);
    for (int v : map_) {
      require(v >= 0 && static_cast<std::size_t>(v) < map_.size() && !seen[v], "permutation is not a bijection");
      seen[v] = true;
    }
  }

  static ComponentPermutation identity(int K) {
    std::vector<int> m(K);
    std::iota(m.begin(), m.end(), 0);
    return ComponentPermutation(std::move(m));
  }

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int k) const { return map_[k]; }
  std::span<const int> mapping() const { return map_; }

  friend bool operator==(const ComponentPermutation&, const ComponentPermutation&) = default;

 private:
  std::vector<int> map_;
};

// Row k of the result is row perm(k) of the input; likewise the weights.
template <typename T>
BasicMixtureParams<T> apply_permutation(const BasicMixtureParams<T>& p, const ComponentPermutation& perm) {
  require(perm.size() == p.K(), "permutation size != K");
  std::vector<T> f;
  f.reserve(p.frequencies().size());
  std::vector<T> w;
  w.reserve(p.K());
  for (int k = 0; k < p.K(); ++k) {
    const int src = perm(k);
    for (int l = 0; l < p.L(); ++l) {
      auto r = p.row(src, l);
      f.insert(f.end(), r.begin(), r.end());
    }
    w.push_back(p.weight(src));
  }
  return {p.K(), p.L(), p.M(), std::move(f), std::move(w), p.mode()};
}

// Exhaustive search for perm with a = b^perm, entrywise within `tolerance`
// (max abs deviation over frequencies and weights). tolerance 0 is exact.
template <typename T>
std::optional<ComponentPermutation> orbit_equal(const BasicMixtureParams<T>& a, const BasicMixtureParams<T>& b,
                                                double tolerance = 0.0) {
  require(a.K() == b.K() && a.L() == b.L() && a.M() == b.M(), "orbit_equal: dimension mismatch");
  require(tolerance >= 0.0, "orbit_equal: negative tolerance");
  const int K = a.K();
  const T tol = T(tolerance);
  auto close = [&](const T& x, const T& y) { return ScalarTraits<T>::abs(T(x - y)) <= tol; };

  // match[i][j]: component i of a agrees with component j of b.
  std::vector<std::vector<bool>> match(K, std::vector<bool>(K));
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      bool ok = close(a.weight(i), b.weight(j));
      for (int l = 0; ok && l < a.L(); ++l) {
        for (int m = 0; ok && m < a.M(); ++m) ok = close(a.freq(i, l, m), b.freq(j, l, m));
      }
      match[i][j] = ok;
    }
  }
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int k = 0; ok && k < K; ++k) ok = match[k][perm[k]];
    if (ok) return ComponentPermutation(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

// Appends zero-probability states up to targetM. Interior inputs come back in
// closure mode since zero frequencies are now present.
template <typename T>
BasicMixtureParams<T> pad_states(const BasicMixtureParams<T>& p, int targetM) {
  require(targetM >= p.M(), "pad_states: target state count below current M");
  if (targetM == p.M()) return p;
  std::vector<T> f;
  f.reserve(static_cast<std::size_t>(p.K()) * p.L() * targetM);
  for (int k = 0; k < p.K(); ++k) {
    for (int l = 0; l < p.L(); ++l) {
      auto r = p.row(k, l);
      f.insert(f.end(), r.begin(), r.end());
      f.insert(f.end(), static_cast<std::size_t>(targetM - p.M()), T(0));
    }
  }
  std::vector<T> w(p.weights().begin(), p.weights().end());
  const Mode mode = p.mode() == Mode::relaxed ? Mode::relaxed : Mode::closure;
  return {p.K(), p.L(), targetM, std::move(f), std::move(w), mode};
}

// Explicit backend conversions.
inline FloatParams to_float(const ExactParams& p) {
  std::vector<double> f, w;
  for (const auto& x : p.frequencies()) f.push_back(to_double(x));
  for (const auto& x : p.weights()) w.push_back(to_double(x));
  // Entries below the double range round to 0; such rows drop to closure.
  const Mode mode = p.mode() == Mode::interior &&
                            std::all_of(f.begin(), f.end(), [](double x) { return x > 0; })
                        ? Mode::interior
                        : (p.mode() == Mode::relaxed ? Mode::relaxed : Mode::closure);
  return {p.K(), p.L(), p.M(), std::move(f), std::move(w), mode};
}

// Exact image of the doubles; mode must still validate exactly.
inline ExactParams to_exact(const FloatParams& p, Mode mode) {
  std::vector<Rational> f, w;
  for (double x : p.frequencies()) f.push_back(exact_from_double(x));
  for (double x : p.weights()) w.push_back(exact_from_double(x));
  return {p.K(), p.L(), p.M(), std::move(f), std::move(w), mode};
}

inline FloatTensor to_float(const ExactTensor& t) {
  std::vector<double> v;
  v.reserve(t.size());
  for (const auto& x : t.values()) v.push_back(to_double(x));
  return {t.M(), t.L(), std::move(v)};
}

inline ExactTensor to_exact(const FloatTensor& t) {
  std::vector<Rational> v;
  v.reserve(t.size());
  for (double x : t.values()) v.push_back(exact_from_double(x));
  return {t.M(), t.L(), std::move(v)};
}

}  // namespace mixid
