#include "mixid/random_model.hpp"

namespace mixid {

namespace {

void push_normalized_counts(std::vector<Rational>& out, int n, Rng& rng, int max_count) {
  std::vector<long> counts(n);
  long total = 0;
  for (auto& c : counts) total += c = rng.range(1, max_count);
  for (long c : counts) out.push_back(make_rational(c, total));
}

}  // namespace

ExactParams random_rational_params(int K, int L, int M, Rng& rng, int max_count) {
  require(K >= 1 && L >= 1 && M >= 2, "random_rational_params: need K >= 1, L >= 1, M >= 2");
  require(max_count >= 1, "random_rational_params: max_count must be >= 1");
  std::vector<Rational> f, w;
  f.reserve(static_cast<std::size_t>(K) * L * M);
  for (int i = 0; i < K * L; ++i) push_normalized_counts(f, M, rng, max_count);
  push_normalized_counts(w, K, rng, max_count);
  return {K, L, M, std::move(f), std::move(w), Mode::interior};
}

}  // namespace mixid
