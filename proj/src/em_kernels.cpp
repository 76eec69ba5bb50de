#include <algorithm>
#include <cmath>
#include <limits>

#include "mixid/kernels.hpp"
#include "mixid/recovery.hpp"

namespace mixid {

namespace {

constexpr std::ptrdiff_t kEmBlocks = 64;

void require_matching(const FloatTensor& dist, const FloatParams& p) {
  require(dist.M() == p.M() && dist.L() == p.L(), "EM: tensor and parameter shapes differ");
  require(p.mode() != Mode::relaxed, "EM needs closure or interior parameters");
}

// Frequencies with every row floored at kFrequencyFloor and renormalized.
std::vector<double> floored_frequencies(const FloatParams& p, std::size_t& count) {
  std::vector<double> f(p.frequencies().begin(), p.frequencies().end());
  const std::size_t M = p.M();
  for (std::size_t r = 0; r < f.size(); r += M) {
    double sum = 0;
    for (std::size_t m = 0; m < M; ++m) {
      if (f[r + m] < kFrequencyFloor) {
        f[r + m] = kFrequencyFloor;
        ++count;
      }
      sum += f[r + m];
    }
    for (std::size_t m = 0; m < M; ++m) f[r + m] /= sum;
  }
  return f;
}

struct Accumulator {
  std::vector<double> mass;    // K
  std::vector<double> counts;  // K*L*M
  double total = 0.0;
  bool zero_likelihood = false;

  Accumulator(int K, int L, int M) : mass(K, 0.0), counts(static_cast<std::size_t>(K) * L * M, 0.0) {}

  void add(const Accumulator& o) {
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] += o.mass[i];
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    total += o.total;
    zero_likelihood = zero_likelihood || o.zero_likelihood;
  }
};

// E-step contribution of cells [begin, end).
void accumulate_cells(const FloatTensor& dist, int K, int L, int M, std::span<const double> f,
                      std::span<const double> w, std::size_t begin, std::size_t end, Accumulator& acc,
                      std::vector<int>& digits, std::vector<double>& joint) {
  std::size_t rest = begin;
  for (int l = L - 1; l >= 0; --l) {
    digits[l] = static_cast<int>(rest % M);
    rest /= M;
  }
  for (std::size_t c = begin; c < end; ++c) {
    const double d = dist[c];
    if (d > 0) {
      double like = 0.0;
      for (int k = 0; k < K; ++k) {
        double j = w[k];
        const double* row = f.data() + static_cast<std::size_t>(k) * L * M;
        for (int l = 0; l < L; ++l) j *= row[static_cast<std::size_t>(l) * M + digits[l]];
        joint[k] = j;
        like += j;
      }
      acc.total += d;
      if (like > 0) {
        for (int k = 0; k < K; ++k) {
          const double r = d * joint[k] / like;
          acc.mass[k] += r;
          double* cnt = acc.counts.data() + static_cast<std::size_t>(k) * L * M;
          for (int l = 0; l < L; ++l) cnt[static_cast<std::size_t>(l) * M + digits[l]] += r;
        }
      } else {
        acc.zero_likelihood = true;
      }
    }
    for (int l = L - 1; l >= 0; --l) {
      if (++digits[l] < M) break;
      digits[l] = 0;
    }
  }
}

FloatParams m_step(const FloatParams& p, const Accumulator& acc, EmDiagnostics& diag) {
  const int K = p.K(), L = p.L(), M = p.M();
  std::vector<double> f(p.frequencies().begin(), p.frequencies().end());
  std::vector<double> w(K);
  for (int k = 0; k < K; ++k) {
    const double mk = acc.mass[k];
    w[k] = acc.total > 0 ? mk / acc.total : 0.0;
    if (!(mk > 0)) {
      ++diag.dead_components;  // keep the old rows for a component with no mass
      w[k] = 0.0;
      continue;
    }
    for (int l = 0; l < L; ++l) {
      const std::size_t off = (static_cast<std::size_t>(k) * L + l) * M;
      double s = 0;
      for (int m = 0; m < M; ++m) s += acc.counts[off + m];
      for (int m = 0; m < M; ++m) f[off + m] = acc.counts[off + m] / s;
    }
  }
  const bool interior = std::all_of(w.begin(), w.end(), [](double x) { return x > 0; }) &&
                        std::all_of(f.begin(), f.end(), [](double x) { return x > 0; });
  return {K, L, M, std::move(f), std::move(w), interior ? Mode::interior : Mode::closure};
}

template <typename Accumulate>
FloatParams em_update(const FloatTensor& dist, const FloatParams& p, EmDiagnostics* diag, Accumulate&& run) {
  require_matching(dist, p);
  check_size_caps(p.K(), p.L(), p.M(), SizeCaps{});
  EmDiagnostics local;
  std::vector<double> f(p.frequencies().begin(), p.frequencies().end());
  Accumulator acc = run(std::span<const double>(f));
  if (acc.zero_likelihood) {
    local.degenerate = true;
    f = floored_frequencies(p, local.floored_entries);
    acc = run(std::span<const double>(f));
  }
  FloatParams out = m_step(p, acc, local);
  if (diag) *diag = local;
  return out;
}

}  // namespace

FloatParams em_step(const FloatTensor& dist, const FloatParams& p, EmDiagnostics* diag) {
  const int K = p.K(), L = p.L(), M = p.M();
  return em_update(dist, p, diag, [&](std::span<const double> f) {
    const std::ptrdiff_t cells = static_cast<std::ptrdiff_t>(dist.size());
    const std::ptrdiff_t blocks = std::min(kEmBlocks, cells);
    std::vector<Accumulator> partial(blocks, Accumulator(K, L, M));
#pragma omp parallel
    {
      std::vector<int> digits(L);
      std::vector<double> joint(K);
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const auto begin = static_cast<std::size_t>(cells * b / blocks);
        const auto end = static_cast<std::size_t>(cells * (b + 1) / blocks);
        accumulate_cells(dist, K, L, M, f, p.weights(), begin, end, partial[b], digits, joint);
      }
    }
    Accumulator acc(K, L, M);
    for (const auto& part : partial) acc.add(part);
    return acc;
  });
}

FloatParams em_step_serial(const FloatTensor& dist, const FloatParams& p, EmDiagnostics* diag) {
  const int K = p.K(), L = p.L(), M = p.M();
  return em_update(dist, p, diag, [&](std::span<const double> f) {
    Accumulator acc(K, L, M);
    std::vector<int> digits(L);
    std::vector<double> joint(K);
    accumulate_cells(dist, K, L, M, f, p.weights(), 0, dist.size(), acc, digits, joint);
    return acc;
  });
}

double cross_entropy(const FloatTensor& dist, const FloatParams& p) {
  require_matching(dist, p);
  const auto model = mixture_distribution(p);
  double total = 0.0;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    if (dist[c] > 0) {
      if (!(model[c] > 0)) return -std::numeric_limits<double>::infinity();
      total += dist[c] * std::log(model[c]);
    }
  }
  return total;
}

double residual(const FloatTensor& dist, const FloatParams& p) {
  require_matching(dist, p);
  return max_abs_deviation(dist, mixture_distribution(p));
}

}  // namespace mixid
