#include "mixid/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mixid::io {

namespace {

json scalar(const Rational& q) { return to_string(q); }
json scalar(double x) { return x; }

bool is_float_number(const json& v) { return v.is_number_float(); }

Rational read_exact(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<long long>())));
  if (v.is_number_unsigned()) return Rational(mpz_class(std::to_string(v.get<unsigned long long>())));
  throw InvalidInput("expected a rational string, got " + v.dump());
}

double read_float(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  throw InvalidInput("expected a number, got " + v.dump());
}

template <typename Fn>
void for_each_scalar(const json& v, Fn&& fn) {
  if (v.is_array()) {
    for (const auto& x : v) for_each_scalar(x, fn);
  } else {
    fn(v);
  }
}

bool decide_exact(const json& j, std::initializer_list<const char*> fields) {
  bool any_float = false;
  for (const char* f : fields) for_each_scalar(j.at(f), [&](const json& v) { any_float = any_float || is_float_number(v); });
  if (j.contains("exact")) {
    const bool exact = j.at("exact").get<bool>();
    require(!(exact && any_float), "artifact declares exact values but contains floating-point numbers");
    return exact;
  }
  return !any_float;
}

int get_int(const json& j, const char* key) {
  require(j.contains(key), std::string("missing field '") + key + "'");
  require(j.at(key).is_number_integer(), std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

template <typename T>
json params_json(const BasicMixtureParams<T>& p) {
  json F = json::array();
  for (int k = 0; k < p.K(); ++k) {
    json comp = json::array();
    for (int l = 0; l < p.L(); ++l) {
      json row = json::array();
      for (const auto& x : p.row(k, l)) row.push_back(scalar(x));
      comp.push_back(std::move(row));
    }
    F.push_back(std::move(comp));
  }
  json w = json::array();
  for (const auto& x : p.weights()) w.push_back(scalar(x));
  return json{{"schema", kModelSchema}, {"K", p.K()}, {"L", p.L()}, {"M", p.M()},
              {"mode", std::string(to_string(p.mode()))}, {"exact", ScalarTraits<T>::exact},
              {"w", std::move(w)}, {"F", std::move(F)}};
}

template <typename T, typename Read>
BasicMixtureParams<T> params_read(const json& j, Read&& read) {
  const int K = get_int(j, "K"), L = get_int(j, "L"), M = get_int(j, "M");
  require(K >= 1 && L >= 1 && M >= 2, "model needs K >= 1, L >= 1, M >= 2");
  const Mode mode = parse_mode(j.at("mode").get<std::string>());
  const json& F = j.at("F");
  const json& w = j.at("w");
  require(F.is_array() && F.size() == static_cast<std::size_t>(K), "F must hold K components");
  require(w.is_array() && w.size() == static_cast<std::size_t>(K), "w must hold K weights");
  std::vector<T> f, wv;
  for (const auto& comp : F) {
    require(comp.is_array() && comp.size() == static_cast<std::size_t>(L), "each component must hold L rows");
    for (const auto& row : comp) {
      require(row.is_array() && row.size() == static_cast<std::size_t>(M), "each row must hold M entries");
      for (const auto& x : row) f.push_back(read(x));
    }
  }
  for (const auto& x : w) wv.push_back(read(x));
  return {K, L, M, std::move(f), std::move(wv), mode};
}

template <typename T>
json tensor_json(const DistributionTensor<T>& t) {
  json v = json::array();
  for (const auto& x : t.values()) v.push_back(scalar(x));
  return json{{"schema", kTensorSchema}, {"M", t.M()}, {"L", t.L()}, {"exact", ScalarTraits<T>::exact},
              {"values", std::move(v)}};
}

void check_schema(const json& j, const char* expected) {
  if (j.is_object() && j.contains("schema")) {
    require(j.at("schema") == expected, "unexpected schema '" + j.at("schema").dump() + "', wanted " + expected);
  }
}

}  // namespace

json to_json(const ExactParams& p) { return params_json(p); }
json to_json(const FloatParams& p) { return params_json(p); }
json to_json(const ExactTensor& t) { return tensor_json(t); }
json to_json(const FloatTensor& t) { return tensor_json(t); }

json to_json(const ExactPolynomial& p) {
  json coeffs = json::object();
  for (std::size_t mask = 0; mask < p.moments().size(); ++mask) coeffs[std::to_string(mask)] = to_string(p.moments()[mask]);
  return json{{"schema", kPolySchema}, {"L", p.L()}, {"coeffs", std::move(coeffs)}};
}

json to_json(const CounterexampleSpec& s) {
  return json{{"schema", kCxSpecSchema}, {"K", s.K}, {"L", s.L}, {"M", s.M}, {"Lbar", s.Lbar},
              {"alpha", to_string(s.alpha)}, {"beta", to_string(s.beta)}};
}

json to_json(const CounterexamplePair& pair) {
  return json{{"schema", kCxPairSchema}, {"spec", to_json(pair.spec)}, {"F", to_json(pair.F)}, {"G", to_json(pair.G)}};
}

json to_json(const VerificationReport& r) {
  json table = json::array();
  for (const auto& row : r.alternating) {
    table.push_back(json{{"copies_of_state_1", row.copies}, {"value", to_string(row.value)},
                         {"expected", to_string(row.expected)}, {"ok", row.ok}});
  }
  json sweep{{"premise", r.lemma4.premise}, {"assignments", r.lemma4.assignments}, {"first_failure", nullptr}};
  if (r.lemma4.first_failure) sweep["first_failure"] = *r.lemma4.first_failure;
  return json{{"schema", kCxReportSchema},
              {"all_passed", r.all_passed()},
              {"checks",
               {{"weights_normalized", r.weights_normalized},
                {"distributions_equal", r.distributions_equal},
                {"orbits_distinct", r.orbits_distinct},
                {"separability_matches", r.separability_matches},
                {"moment_premise", r.lemma4.premise},
                {"alternating_sum", r.alternating_ok}}},
              {"first_differing_cell", r.first_differing_cell ? json(*r.first_differing_cell) : json(nullptr)},
              {"separability",
               {{"strong_F", r.strong_F}, {"weak_F", r.weak_F}, {"strong_G", r.strong_G}, {"weak_G", r.weak_G}}},
              {"premise_sweep", std::move(sweep)},
              {"alternating_sum", std::move(table)}};
}

json to_json(const RecoveryConfig& c) {
  return json{{"K", c.K},
              {"starts", c.starts},
              {"seed", c.seed},
              {"rng", std::string(Rng::kName)},
              {"max_iters", c.max_iters},
              {"em_tol", c.em_tol},
              {"polish_tol", c.polish_tol},
              {"polish_max_iters", c.polish_max_iters},
              {"orbit_tol", c.orbit_tol},
              {"residual_threshold", c.residual_threshold}};
}

json to_json(const RecoveryReport& r) {
  json sols = json::array();
  for (const auto& s : r.solutions) {
    sols.push_back(json{{"start", s.start},
                        {"seed", s.seed},
                        {"residual", s.residual},
                        {"em_iterations", s.em_iterations},
                        {"em_degenerate", s.em_degenerate},
                        {"polish_iterations", s.polish_iterations},
                        {"polish_converged", s.polish_converged},
                        {"params", to_json(s.params)}});
  }
  json orbits = json::array();
  for (const auto& o : r.orbits) {
    orbits.push_back(json{{"representative", o.representative},
                          {"members", o.members},
                          {"best_residual", o.best_residual},
                          {"params", to_json(r.solutions[o.representative].params)}});
  }
  json out{{"schema", kRecoverySchema},
           {"config", to_json(r.config)},
           {"solutions", std::move(sols)},
           {"orbits", std::move(orbits)},
           {"best", r.best},
           {"converged", r.converged_count()},
           {"verdict_hint", nullptr}};
  if (r.verdict_hint) out["verdict_hint"] = std::string(to_string(*r.verdict_hint));
  return out;
}

json to_json(const ProbeReport& r) {
  return json{{"schema", kProbeSchema},
              {"unique_orbit", r.unique_orbit},
              {"orbits_found", r.orbits_found},
              {"converged", r.converged},
              {"matches_truth", r.matches_truth},
              {"recovery", to_json(r.recovery)}};
}

bool is_model(const json& j) { return j.is_object() && j.contains("F") && j.contains("w"); }
bool is_tensor(const json& j) { return j.is_object() && j.contains("values"); }

AnyParams params_from_json(const json& j) {
  require(is_model(j), "not a model artifact");
  check_schema(j, kModelSchema);
  if (decide_exact(j, {"F", "w"})) return params_read<Rational>(j, read_exact);
  return params_read<double>(j, read_float);
}

AnyTensor tensor_from_json(const json& j) {
  require(is_tensor(j), "not a tensor artifact");
  check_schema(j, kTensorSchema);
  const int M = get_int(j, "M"), L = get_int(j, "L");
  const json& v = j.at("values");
  require(v.is_array(), "tensor values must be an array");
  if (decide_exact(j, {"values"})) {
    std::vector<Rational> vals;
    for (const auto& x : v) vals.push_back(read_exact(x));
    return ExactTensor(M, L, std::move(vals));
  }
  std::vector<double> vals;
  for (const auto& x : v) vals.push_back(read_float(x));
  return FloatTensor(M, L, std::move(vals));
}

ExactPolynomial poly_from_json(const json& j) {
  check_schema(j, kPolySchema);
  const int L = get_int(j, "L");
  require(L >= 1 && L <= 24, "polynomial L out of range");
  const json& c = j.at("coeffs");
  require(c.is_object() && c.size() == (std::size_t{1} << L), "coeffs must map all 2^L subsets");
  std::vector<Rational> s(std::size_t{1} << L);
  std::vector<bool> seen(s.size(), false);
  for (auto it = c.begin(); it != c.end(); ++it) {
    std::size_t pos = 0;
    unsigned long mask = 0;
    try {
      mask = std::stoul(it.key(), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    require(pos == it.key().size() && mask < s.size() && !seen[mask], "bad subset key '" + it.key() + "'");
    seen[mask] = true;
    s[mask] = read_exact(it.value());
  }
  return {L, std::move(s)};
}

StateSelector selector_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("states") : j;
  require(arr.is_array(), "selector must be an array of states");
  std::vector<int> states;
  for (const auto& x : arr) {
    require(x.is_number_integer(), "selector entries must be integers");
    states.push_back(x.get<int>());
  }
  return StateSelector(std::move(states));
}

CounterexampleSpec cx_spec_from_json(const json& j) {
  check_schema(j, kCxSpecSchema);
  CounterexampleSpec s;
  s.K = get_int(j, "K");
  s.L = get_int(j, "L");
  s.M = get_int(j, "M");
  s.Lbar = get_int(j, "Lbar");
  require(s.K >= 2 && s.M >= 2 && s.Lbar >= 0, "counterexample spec needs K >= 2, M >= 2, Lbar >= 0");
  auto [a, b] = default_scale(s.K, s.Lbar, s.M);
  s.alpha = j.contains("alpha") ? read_exact(j.at("alpha")) : a;
  s.beta = j.contains("beta") ? read_exact(j.at("beta")) : b;
  return s;
}

ExactParams require_exact(const AnyParams& p) {
  if (const auto* e = std::get_if<ExactParams>(&p)) return *e;
  throw InvalidInput("this operation needs an exact (rational) model");
}

ExactTensor require_exact(const AnyTensor& t) {
  if (const auto* e = std::get_if<ExactTensor>(&t)) return *e;
  throw InvalidInput("this operation needs an exact (rational) tensor");
}

CounterexamplePair cx_pair_from_json(const json& j) {
  check_schema(j, kCxPairSchema);
  return {cx_spec_from_json(j.at("spec")), require_exact(params_from_json(j.at("F"))),
          require_exact(params_from_json(j.at("G")))};
}

json read_json_file(const std::string& path) {
  try {
    if (path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    require(in.good(), "cannot open '" + path + "'");
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("invalid JSON in '" + path + "': " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << dump(j);
    return;
  }
  std::ofstream out(path);
  require(out.good(), "cannot write '" + path + "'");
  out << dump(j);
}

}  // namespace mixid::io
