#include "mixid/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "mixid/kernels.hpp"

namespace mixid {

void RecoveryConfig::validate() const {
  require(K >= 1, "recovery: K must be >= 1");
  require(starts >= 1, "recovery: starts must be >= 1");
  require(max_iters >= 0 && polish_max_iters >= 0, "recovery: iteration caps must be >= 0");
  require(em_tol > 0 && polish_tol > 0 && orbit_tol > 0 && residual_threshold > 0,
          "recovery: tolerances must be > 0");
}

std::size_t RecoveryReport::converged_count() const {
  return static_cast<std::size_t>(std::count_if(solutions.begin(), solutions.end(), [&](const Solution& s) {
    return s.residual < config.residual_threshold;
  }));
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += out[i] = std::max(v[i] - theta, 0.0);
  for (auto& x : out) x /= sum;
  return out;
}

FloatParams random_start(int K, int L, int M, Rng& rng) {
  const double eps = std::min(0.05, 0.5 / M);
  std::vector<double> f;
  f.reserve(static_cast<std::size_t>(K) * L * M);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      for (double u : rng.flat_dirichlet(M)) f.push_back(eps + (1.0 - M * eps) * u);
    }
  }
  auto w = rng.flat_dirichlet(K);
  const bool interior = std::all_of(w.begin(), w.end(), [](double x) { return x > 0; });
  return {K, L, M, std::move(f), std::move(w), interior ? Mode::interior : Mode::closure};
}

namespace {

// Reduced coordinates: the first K-1 weights, then the first M-1 entries of
// every (k, l) row. The dropped entry of each simplex is 1 minus the rest.
class Parametrization {
 public:
  Parametrization(int K, int L, int M) : K_(K), L_(L), M_(M) {}

  int size() const { return (K_ - 1) + K_ * L_ * (M_ - 1); }
  int weight_index(int k) const { return k; }
  int freq_index(int k, int l, int m) const { return (K_ - 1) + ((k * L_ + l) * (M_ - 1)) + m; }

  Eigen::VectorXd reduce(const FloatParams& p) const {
    Eigen::VectorXd x(size());
    for (int k = 0; k + 1 < K_; ++k) x[weight_index(k)] = p.weight(k);
    for (int k = 0; k < K_; ++k)
      for (int l = 0; l < L_; ++l)
        for (int m = 0; m + 1 < M_; ++m) x[freq_index(k, l, m)] = p.freq(k, l, m);
    return x;
  }

  FloatParams expand_projected(const Eigen::VectorXd& x) const {
    std::vector<double> w(K_), f;
    f.reserve(static_cast<std::size_t>(K_) * L_ * M_);
    double wsum = 0.0;
    for (int k = 0; k + 1 < K_; ++k) wsum += w[k] = x[weight_index(k)];
    w[K_ - 1] = 1.0 - wsum;
    w = project_to_simplex(w);
    std::vector<double> row(M_);
    for (int k = 0; k < K_; ++k) {
      for (int l = 0; l < L_; ++l) {
        double s = 0.0;
        for (int m = 0; m + 1 < M_; ++m) s += row[m] = x[freq_index(k, l, m)];
        row[M_ - 1] = 1.0 - s;
        const auto proj = project_to_simplex(row);
        f.insert(f.end(), proj.begin(), proj.end());
      }
    }
    return {K_, L_, M_, std::move(f), std::move(w), Mode::closure};
  }

 private:
  int K_, L_, M_;
};

// Residual vector model - dist and its Jacobian in reduced coordinates.
void residual_and_jacobian(const FloatTensor& dist, const FloatParams& p, const Parametrization& param,
                           Eigen::VectorXd& r, Eigen::MatrixXd& J) {
  const int K = p.K(), L = p.L(), M = p.M();
  const auto cells = static_cast<std::ptrdiff_t>(dist.size());
  r.resize(cells);
  J.setZero(cells, param.size());
#pragma omp parallel
  {
    std::vector<int> digits(L);
    std::vector<double> prefix(L + 1), suffix(L + 1), comp(K);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < cells; ++c) {
      std::size_t rest = static_cast<std::size_t>(c);
      for (int l = L - 1; l >= 0; --l) {
        digits[l] = static_cast<int>(rest % M);
        rest /= M;
      }
      double model = 0.0;
      for (int k = 0; k < K; ++k) {
        prefix[0] = 1.0;
        for (int l = 0; l < L; ++l) prefix[l + 1] = prefix[l] * p.freq(k, l, digits[l]);
        suffix[L] = 1.0;
        for (int l = L - 1; l >= 0; --l) suffix[l] = suffix[l + 1] * p.freq(k, l, digits[l]);
        comp[k] = prefix[L];
        model += p.weight(k) * comp[k];
        for (int l = 0; l < L; ++l) {
          const double g = p.weight(k) * prefix[l] * suffix[l + 1];
          if (digits[l] == M - 1) {
            for (int m = 0; m + 1 < M; ++m) J(c, param.freq_index(k, l, m)) -= g;
          } else {
            J(c, param.freq_index(k, l, digits[l])) += g;
          }
        }
      }
      for (int k = 0; k + 1 < K; ++k) J(c, param.weight_index(k)) = comp[k] - comp[K - 1];
      r[c] = model - dist[c];
    }
  }
}

double sum_squares(const FloatTensor& dist, const FloatParams& p) {
  const auto model = mixture_distribution(p);
  double s = 0.0;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    const double d = model[c] - dist[c];
    s += d * d;
  }
  return s;
}

}  // namespace

PolishResult polish(const FloatParams& start, const FloatTensor& dist, const RecoveryConfig& cfg) {
  require(dist.M() == start.M() && dist.L() == start.L(), "polish: tensor and parameter shapes differ");
  require(start.mode() != Mode::relaxed, "polish needs closure or interior parameters");
  const Parametrization param(start.K(), start.L(), start.M());
  FloatParams current = start;
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  residual_and_jacobian(dist, current, param, r, J);
  double sse = r.squaredNorm();
  double lambda = -1.0;

  PolishResult out{current, r.lpNorm<Eigen::Infinity>(), 0.0, 0, false};
  for (int it = 0; it < cfg.polish_max_iters; ++it) {
    const Eigen::VectorXd g = J.transpose() * r;
    out.gradient_norm = g.lpNorm<Eigen::Infinity>();
    out.iterations = it;
    if (out.gradient_norm < cfg.polish_tol || r.lpNorm<Eigen::Infinity>() < 1e-16) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const double scale = std::max(A.diagonal().maxCoeff(), 1e-300);
    if (lambda < 0) lambda = 1e-6 * scale;

    bool accepted = false;
    while (!accepted && lambda < 1e16 * scale) {
      Eigen::MatrixXd damped = A;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      const FloatParams candidate = param.expand_projected(param.reduce(current) + step);
      const double cand_sse = sum_squares(dist, candidate);
      if (cand_sse < sse) {
        current = candidate;
        sse = cand_sse;
        lambda = std::max(lambda / 5.0, 1e-15 * scale);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // No descent direction left at working precision.
      out.converged = out.gradient_norm < std::sqrt(cfg.polish_tol);
      break;
    }
    residual_and_jacobian(dist, current, param, r, J);
    out.iterations = it + 1;
  }
  out.params = current;
  out.residual = r.lpNorm<Eigen::Infinity>();
  return out;
}

namespace {

Solution run_chain(const FloatTensor& dist, const RecoveryConfig& cfg, const FloatParams& init) {
  Solution s{0, 0, init, 0.0, 0, false, 0, false};
  FloatParams p = init;
  double obj = cross_entropy(dist, p);
  for (int it = 0; it < cfg.max_iters; ++it) {
    EmDiagnostics diag;
    FloatParams next = em_step(dist, p, &diag);
    s.em_degenerate = s.em_degenerate || diag.degenerate;
    const double next_obj = cross_entropy(dist, next);
    p = std::move(next);
    s.em_iterations = it + 1;
    const double gain = next_obj - obj;
    obj = next_obj;
    if (std::isfinite(obj) && gain <= cfg.em_tol * std::max(1.0, std::fabs(obj))) break;
  }
  auto pol = polish(p, dist, cfg);
  s.params = std::move(pol.params);
  s.polish_iterations = pol.iterations;
  s.polish_converged = pol.converged;
  s.residual = residual(dist, s.params);
  return s;
}

// Components sorted lexicographically by (rows, weight); used only for ordering.
std::vector<double> canonical_key(const FloatParams& p) {
  std::vector<std::vector<double>> comps(p.K());
  for (int k = 0; k < p.K(); ++k) {
    for (int l = 0; l < p.L(); ++l) {
      auto row = p.row(k, l);
      comps[k].insert(comps[k].end(), row.begin(), row.end());
    }
    comps[k].push_back(p.weight(k));
  }
  std::sort(comps.begin(), comps.end());
  std::vector<double> key;
  for (auto& c : comps) key.insert(key.end(), c.begin(), c.end());
  return key;
}

}  // namespace

std::vector<Orbit> cluster_orbits(std::span<const Solution> solutions, double orbit_tol) {
  std::vector<std::vector<double>> keys;
  keys.reserve(solutions.size());
  for (const auto& s : solutions) keys.push_back(canonical_key(s.params));
  std::vector<std::size_t> order(solutions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  std::vector<Orbit> orbits;
  for (std::size_t idx : order) {
    const auto& s = solutions[idx];
    auto it = std::find_if(orbits.begin(), orbits.end(), [&](const Orbit& o) {
      return orbit_equal(solutions[o.representative].params, s.params, orbit_tol).has_value();
    });
    if (it == orbits.end()) {
      orbits.push_back(Orbit{idx, {idx}, s.residual});
    } else {
      it->members.push_back(idx);
      it->best_residual = std::min(it->best_residual, s.residual);
    }
  }
  return orbits;
}

RecoveryReport recover_from(const FloatTensor& dist, const RecoveryConfig& cfg, std::span<const FloatParams> inits) {
  cfg.validate();
  check_size_caps(cfg.K, dist.L(), dist.M(), cfg.caps);
  for (const auto& p : inits) {
    require(p.K() == cfg.K && p.L() == dist.L() && p.M() == dist.M(), "recovery: initial point has wrong shape");
  }
  RecoveryReport report;
  report.config = cfg;
  std::vector<std::optional<Solution>> slots(inits.size());

  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(inits.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      Solution s = run_chain(dist, cfg, inits[i]);
      s.start = static_cast<int>(i);
      slots[i] = std::move(s);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (auto& s : slots) report.solutions.push_back(std::move(*s));

  report.orbits = cluster_orbits(report.solutions, cfg.orbit_tol);
  for (std::size_t i = 0; i < report.solutions.size(); ++i)
    if (report.solutions[i].residual < report.solutions[report.best].residual) report.best = i;
  return report;
}

RecoveryReport multi_start_recover(const FloatTensor& dist, const RecoveryConfig& cfg) {
  cfg.validate();
  std::vector<FloatParams> inits;
  std::vector<std::uint64_t> seeds;
  inits.reserve(cfg.starts);
  for (int s = 0; s < cfg.starts; ++s) {
    seeds.push_back(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    Rng rng(seeds.back());
    inits.push_back(random_start(cfg.K, dist.L(), dist.M(), rng));
  }
  auto report = recover_from(dist, cfg, inits);
  for (auto& s : report.solutions) s.seed = seeds[s.start];
  return report;
}

ProbeReport identifiability_probe(const ExactParams& truth, const RecoveryConfig& cfg_in) {
  require(truth.mode() == Mode::interior, "identifiability_probe needs an interior-mode truth");
  RecoveryConfig cfg = cfg_in;
  cfg.K = truth.K();
  const auto dist = to_float(mixture_distribution(truth, cfg.caps));
  const auto truth_f = to_float(truth);

  ProbeReport out;
  out.recovery = multi_start_recover(dist, cfg);
  out.recovery.verdict_hint = theorem_guarantee(truth);

  bool all_match = true;
  for (const auto& s : out.recovery.solutions) {
    if (s.residual >= cfg.residual_threshold) continue;
    ++out.converged;
    const bool match = orbit_equal(truth_f, s.params, cfg.orbit_tol).has_value();
    out.matches_truth = out.matches_truth || match;
    all_match = all_match && match;
  }
  for (const auto& o : out.recovery.orbits) {
    const bool has_converged = std::any_of(o.members.begin(), o.members.end(), [&](std::size_t i) {
      return out.recovery.solutions[i].residual < cfg.residual_threshold;
    });
    if (has_converged) ++out.orbits_found;
  }
  out.unique_orbit = out.converged > 0 && all_match;
  return out;
}

}  // namespace mixid
