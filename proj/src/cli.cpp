#include "mixid/cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <sstream>

#include "mixid/charpoly.hpp"
#include "mixid/counterexample.hpp"
#include "mixid/io.hpp"
#include "mixid/kernels.hpp"
#include "mixid/projection.hpp"
#include "mixid/random_model.hpp"
#include "mixid/recovery.hpp"
#include "mixid/separability.hpp"

namespace mixid {

namespace {

using io::json;

class Emitter {
 public:
  Emitter(std::ostream& out) : out_(out) {}
  void operator()(const json& j, const std::string& path) const {
    if (path.empty() || path == "-") {
      out_ << io::dump(j);
    } else {
      io::write_json(j, path);
    }
  }

 private:
  std::ostream& out_;
};

template <typename T>
json separability_json(const BasicMixtureParams<T>& p) {
  const auto strong = strong_separability(p);
  const auto weak = weak_separability(p);
  json weak_list = json::array();
  for (auto [l, m] : weak) weak_list.push_back(json{{"variable", l}, {"witness_state", m}});
  json out{{"schema", io::kSeparabilitySchema},
           {"K", p.K()},
           {"L", p.L()},
           {"M", p.M()},
           {"mode", std::string(to_string(p.mode()))},
           {"L_s", strong.size()},
           {"L_w", weak.size()},
           {"strong", strong},
           {"weak", std::move(weak_list)},
           {"verdict", nullptr}};
  if (p.mode() == Mode::interior) out["verdict"] = std::string(to_string(theorem_guarantee(p)));
  return out;
}

ExactPolynomial poly_of(const json& j) {
  if (io::is_model(j)) return charpoly_from_params(io::require_exact(io::params_from_json(j)));
  if (io::is_tensor(j)) return charpoly_from_distribution(io::require_exact(io::tensor_from_json(j)));
  if (j.is_object() && j.contains("coeffs")) return io::poly_from_json(j);
  throw InvalidInput("expected a binary model, binary tensor, or polynomial artifact");
}

struct RecoveryOptions {
  int K = 0;
  RecoveryConfig cfg;
};

void add_recovery_options(CLI::App* cmd, RecoveryOptions& o) {
  cmd->add_option("--K", o.K, "Component count to fit (defaults to the model's K)");
  cmd->add_option("--starts", o.cfg.starts, "Number of random initializations")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.cfg.seed, "64-bit seed for all randomness");
  cmd->add_option("--max-iters", o.cfg.max_iters, "EM iteration cap per start");
  cmd->add_option("--em-tol", o.cfg.em_tol, "Relative objective-improvement stop threshold");
  cmd->add_option("--polish-tol", o.cfg.polish_tol, "Gradient-norm stop threshold for the polish");
  cmd->add_option("--polish-max-iters", o.cfg.polish_max_iters, "Polish iteration cap");
  cmd->add_option("--orbit-tol", o.cfg.orbit_tol, "Orbit clustering tolerance");
  cmd->add_option("--residual-threshold", o.cfg.residual_threshold, "Residual below which a solution counts as exact");
}

int exit_for(const std::exception& e, std::ostream& err, int code) {
  err << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mixid: identifiability toolkit for finite mixtures of finite product measures.\n"
               "States are 0-based in every JSON artifact."};
  app.require_subcommand(1);
  const Emitter emit(out);
  std::string output;
  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Random interior rational model");
  int gK = 2, gL = 3, gM = 2, g_min_strong = -1, g_counts = 20, g_tries = 10000;
  std::uint64_t g_seed = 0;
  gen->add_option("--K", gK, "Components")->required();
  gen->add_option("--L", gL, "Variables")->required();
  gen->add_option("--M", gM, "States per variable")->required();
  gen->add_option("--seed", g_seed, "64-bit seed")->required();
  gen->add_option("--min-strong-sep", g_min_strong, "Resample until at least N strongly separable variables");
  gen->add_option("--max-count", g_counts, "Entries are normalized integers in [1, max-count]");
  gen->add_option("--max-tries", g_tries, "Resampling budget for --min-strong-sep");
  gen->add_option("-o,--output", output, "Output file (default stdout)");
  gen->callback([&] {
    action = [&] {
      Rng rng(g_seed);
      for (int attempt = 0; attempt < g_tries; ++attempt) {
        auto p = random_rational_params(gK, gL, gM, rng, g_counts);
        if (static_cast<int>(strong_separability(p).size()) >= g_min_strong) {
          emit(io::to_json(p), output);
          return int{kExitOk};
        }
      }
      throw InvalidInput("no model with the requested strong separability within --max-tries draws");
    };
  });

  // dist
  auto* dist = app.add_subcommand("dist", "Mixture distribution tensor of a model");
  std::string d_in;
  bool d_exact = false;
  dist->add_option("model", d_in, "Model JSON ('-' for stdin)")->required();
  dist->add_flag("--exact", d_exact, "Exact rational tensor (needs an exact model)");
  dist->add_option("-o,--output", output, "Output file");
  dist->callback([&] {
    action = [&] {
      const auto any = io::params_from_json(io::read_json_file(d_in));
      if (d_exact) {
        emit(io::to_json(mixture_distribution(io::require_exact(any))), output);
      } else if (const auto* e = std::get_if<ExactParams>(&any)) {
        emit(io::to_json(to_float(mixture_distribution(*e))), output);
      } else {
        emit(io::to_json(mixture_distribution(std::get<FloatParams>(any))), output);
      }
      return int{kExitOk};
    };
  });

  // sep
  auto* sep = app.add_subcommand("sep", "Strong/weak separability and threshold verdict");
  std::string s_in;
  sep->add_option("model", s_in, "Model JSON")->required();
  sep->add_option("-o,--output", output, "Output file");
  sep->callback([&] {
    action = [&] {
      const auto any = io::params_from_json(io::read_json_file(s_in));
      std::visit([&](const auto& p) { emit(separability_json(p), output); }, any);
      return int{kExitOk};
    };
  });

  // charpoly
  auto* cp = app.add_subcommand("charpoly", "Characteristic polynomial of a binary model or tensor");
  std::vector<std::string> c_in;
  bool c_compare = false;
  cp->add_option("inputs", c_in, "One input, or two with --compare")->required();
  cp->add_flag("--compare", c_compare, "Test polynomial identity of two inputs");
  cp->add_option("-o,--output", output, "Output file");
  cp->callback([&] {
    action = [&] {
      if (c_compare) {
        require(c_in.size() == 2, "--compare takes exactly two inputs");
        const bool same = poly_identity(poly_of(io::read_json_file(c_in[0])), poly_of(io::read_json_file(c_in[1])));
        emit(json{{"schema", "mixid.charpoly-compare/1"}, {"identical", same}}, output);
        return int{same ? kExitOk : kExitVerificationFailed};
      }
      require(c_in.size() == 1, "charpoly takes one input without --compare");
      emit(io::to_json(poly_of(io::read_json_file(c_in[0]))), output);
      return int{kExitOk};
    };
  });

  // project
  auto* proj = app.add_subcommand("project", "Binary projection of a model or tensor");
  std::string p_in, p_sel;
  proj->add_option("input", p_in, "Model or tensor JSON")->required();
  proj->add_option("--selector", p_sel, "Selector JSON: array of L 0-based states")->required();
  proj->add_option("-o,--output", output, "Output file");
  proj->callback([&] {
    action = [&] {
      const json j = io::read_json_file(p_in);
      const StateSelector sel = io::selector_from_json(io::read_json_file(p_sel));
      if (io::is_model(j)) {
        std::visit([&](const auto& p) { emit(io::to_json(project_params(p, sel)), output); }, io::params_from_json(j));
      } else {
        std::visit([&](const auto& t) { emit(io::to_json(project_distribution(t, sel)), output); },
                   io::tensor_from_json(j));
      }
      return int{kExitOk};
    };
  });

  // cx-build
  auto* cxb = app.add_subcommand("cx-build", "Build a non-identifiable counterexample pair");
  std::string b_spec, b_alpha, b_beta;
  std::optional<int> bK, bL, bM, bLbar;
  bool b_trivial = false;
  cxb->add_option("spec", b_spec, "Spec JSON {K, L, M, Lbar, alpha?, beta?}");
  cxb->add_option("--K", bK, "Components (>= 2)");
  cxb->add_option("--L", bL, "Variables");
  cxb->add_option("--M", bM, "States");
  cxb->add_option("--Lbar", bLbar, "Separable-variable count in [1, min(2K-2, L)]");
  cxb->add_option("--alpha", b_alpha, "Scale alpha as p/q (default: automatic)");
  cxb->add_option("--beta", b_beta, "Scale beta as p/q (default: automatic)");
  cxb->add_flag("--trivial", b_trivial, "Lbar = 0 family (twin components, different weight splits)");
  cxb->add_option("-o,--output", output, "Output file");
  cxb->callback([&] {
    action = [&] {
      if (b_trivial) {
        require(bK && bL && bM, "--trivial needs --K, --L and --M");
        emit(io::to_json(build_trivial_pair(*bK, *bL, *bM)), output);
        return int{kExitOk};
      }
      CounterexampleSpec spec;
      if (!b_spec.empty()) {
        spec = io::cx_spec_from_json(io::read_json_file(b_spec));
      } else {
        require(bK && bL && bM && bLbar, "cx-build needs a spec file or --K, --L, --M and --Lbar");
        require(*bK >= 2 && *bM >= 2 && *bLbar >= 0, "cx-build needs K >= 2, M >= 2, Lbar >= 0");
        spec.K = *bK;
        spec.L = *bL;
        spec.M = *bM;
        spec.Lbar = *bLbar;
        std::tie(spec.alpha, spec.beta) = default_scale(spec.K, spec.Lbar, spec.M);
      }
      if (!b_alpha.empty()) spec.alpha = parse_rational(b_alpha);
      if (!b_beta.empty()) spec.beta = parse_rational(b_beta);
      emit(io::to_json(build_pair(spec)), output);
      return int{kExitOk};
    };
  });

  // cx-verify
  auto* cxv = app.add_subcommand("cx-verify", "Exact verification report for a counterexample pair");
  std::string v_in;
  cxv->add_option("pair", v_in, "Pair JSON from cx-build")->required();
  cxv->add_option("-o,--output", output, "Output file");
  cxv->callback([&] {
    action = [&] {
      const auto report = verify_pair(io::cx_pair_from_json(io::read_json_file(v_in)));
      emit(io::to_json(report), output);
      return int{report.all_passed() ? kExitOk : kExitVerificationFailed};
    };
  });

  // recover
  auto* rec = app.add_subcommand("recover", "Multi-start numerical recovery from a tensor or model");
  std::string r_in;
  RecoveryOptions r_opts;
  rec->add_option("input", r_in, "Tensor or model JSON")->required();
  add_recovery_options(rec, r_opts);
  rec->add_option("-o,--output", output, "Output file");
  rec->callback([&] {
    action = [&] {
      const json j = io::read_json_file(r_in);
      std::optional<FloatTensor> tensor;
      int model_K = 0;
      if (io::is_model(j)) {
        const auto any = io::params_from_json(j);
        std::visit([&](const auto& p) { model_K = p.K(); }, any);
        if (const auto* e = std::get_if<ExactParams>(&any)) {
          tensor = to_float(mixture_distribution(*e, r_opts.cfg.caps));
        } else {
          tensor = mixture_distribution(std::get<FloatParams>(any), r_opts.cfg.caps);
        }
      } else {
        const auto any = io::tensor_from_json(j);
        if (const auto* e = std::get_if<ExactTensor>(&any)) {
          tensor = to_float(*e);
        } else {
          tensor = std::get<FloatTensor>(any);
        }
      }
      r_opts.cfg.K = r_opts.K > 0 ? r_opts.K : model_K;
      require(r_opts.cfg.K >= 1, "recover on a tensor needs --K");
      emit(io::to_json(multi_start_recover(*tensor, r_opts.cfg)), output);
      return int{kExitOk};
    };
  });

  // probe
  auto* prb = app.add_subcommand("probe", "Empirical identifiability probe of an exact interior model");
  std::string pr_in;
  RecoveryOptions pr_opts;
  prb->add_option("model", pr_in, "Exact interior model JSON")->required();
  add_recovery_options(prb, pr_opts);
  prb->add_option("-o,--output", output, "Output file");
  prb->callback([&] {
    action = [&] {
      const auto truth = io::require_exact(io::params_from_json(io::read_json_file(pr_in)));
      const auto report = identifiability_probe(truth, pr_opts.cfg);
      emit(io::to_json(report), output);
      // A guaranteed-identifiable truth must come back unique.
      const bool guaranteed = report.recovery.verdict_hint != Verdict::no_guarantee;
      return int{guaranteed && !report.unique_orbit ? kExitVerificationFailed : kExitOk};
    };
  });

  std::vector<std::string> storage = args;
  if (storage.empty()) storage.push_back("mixid");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalidInput;
  }

  try {
    return action ? action() : int{kExitInvalidInput};
  } catch (const ResourceCap& e) {
    return exit_for(e, err, kExitResourceCap);
  } catch (const InvalidInput& e) {
    return exit_for(e, err, kExitInvalidInput);
  } catch (const HypothesisViolation& e) {
    return exit_for(e, err, kExitInvalidInput);
  } catch (const std::exception& e) {
    return exit_for(e, err, kExitInvalidInput);
  }
}

}  // namespace mixid
