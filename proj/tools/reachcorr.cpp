#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "reachcorr/correspond.hpp"
#include "reachcorr/json_io.hpp"
#include "reachcorr/models.hpp"
#include "reachcorr/operators.hpp"
#include "reachcorr/oracle.hpp"
#include "reachcorr/reachability.hpp"
#include "reachcorr/solver.hpp"
#include "reachcorr/words.hpp"

using namespace reachcorr;

namespace {

enum Exit : int {
  kOk = 0,
  kNoCoincidence = 1,
  kGrcFails = 2,
  kApproximate = 3,
  kInput = 4,
  kInternal = 5,
  kBudget = 6,
};

struct Options {
  std::string model;
  std::string instance;
  std::string words;
  std::string labels;
  std::string oracle;
  double tol = 1e-6;
  double epsilon = 1e-10;
  std::size_t max_iter = 100000;
  double cap = 1e12;
  std::size_t horizon = 0;
  bool horizon_set = false;
  std::size_t maxlen = 4;
  bool quiet = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(ModelError::Kind::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& o, const Json& out) {
  if (!o.quiet) std::cout << out.dump(2) << "\n";
}

ConvergencePolicy policy_of(const Options& o) {
  ConvergencePolicy p = o.horizon_set ? ConvergencePolicy::bounded(o.horizon)
                                      : ConvergencePolicy::tolerance(o.epsilon, o.max_iter);
  p.divergence_cap = ExtReal(o.cap);
  p.max_iterations = o.max_iter;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

template <class M>
const M& expect(const Model& model, const std::string& what) {
  if (const auto* m = std::get_if<M>(&model)) return *m;
  throw UsageError(what + " needs a different model type than " + model_type_name(model));
}

std::vector<LassoWord> lasso_words(const Options& o, const Dlts& d) {
  if (o.words.empty()) throw UsageError("dlts models need --words");
  return load_lasso_words(read_file(o.words), d.labels);
}

MarkovChain label_chain(const Options& o) {
  const Model m = load_model_file(o.labels);
  return expect<MarkovChain>(m, "--labels");
}

template <Lattice L>
Json solve_json(const Operator<L>& op, const ConvergencePolicy& policy, int& code) {
  const auto trace = kleene_lfp(op, policy, false);
  const bool exact = chain_scope(op.lattice, trace) == Verdict::Scope::Exact;
  code = trace.converged ? kOk : kApproximate;
  return Json{{"values", valuation_json(trace.last(), op.label)},
              {"scope", exact ? std::string("exact") : trace.scope()},
              {"converged", trace.converged},
              {"steps", trace.steps}};
}

Json solve_trace_json(const ChainTrace<ExtReal>& trace, const std::vector<std::string>& states, int& code) {
  code = trace.converged ? kOk : kApproximate;
  return Json{{"values", valuation_json(trace.last(), [&](std::size_t i) { return states[i]; })},
              {"scope", trace.scope()},
              {"converged", trace.converged},
              {"steps", trace.steps}};
}

int cmd_solve(const Options& o) {
  const auto tag = parse_instance(o.instance);
  if (!tag) throw UsageError("unknown instance \"" + o.instance + "\"");
  const Model model = load_model_file(o.model);
  const auto policy = policy_of(o);
  int code = kOk;
  Json out;
  switch (*tag) {
    case InstanceTag::McPartial:
      out = solve_json(make_mc_partial(expect<MarkovChain>(model, o.instance)), policy, code);
      break;
    case InstanceTag::McTotal: {
      const auto& mc = expect<MarkovChain>(model, o.instance);
      const auto mu = mc_total_exact(mc);
      out = Json{{"values", valuation_json(mu, [&](std::size_t i) { return mc.states[i]; })},
                 {"scope", "exact"},
                 {"converged", true},
                 {"steps", 0}};
      break;
    }
    case InstanceTag::MdpPartialFrontier:
      out = solve_json(make_mdp_partial(expect<Mdp>(model, o.instance)), policy, code);
      break;
    case InstanceTag::MdpTotal: {
      const auto& mdp = expect<Mdp>(model, o.instance);
      out = solve_trace_json(mdp_total_lfp(mdp, policy), mdp.states, code);
      break;
    }
    case InstanceTag::LiftPartial:
      out = solve_json(make_lift_partial(expect<Mdp>(model, o.instance)), policy, code);
      break;
    case InstanceTag::LiftTotal:
      out = solve_json(make_lift_total(expect<Mdp>(model, o.instance)), policy, code);
      break;
    case InstanceTag::ResourceBounded:
      out = solve_json(make_resource(expect<ResourceGraph>(model, o.instance)), policy, code);
      break;
    case InstanceTag::ResourceReach:
      out = solve_json(make_resource_reach(expect<ResourceGraph>(model, o.instance)), policy, code);
      break;
    case InstanceTag::DltsPartial: {
      const auto& d = expect<Dlts>(model, o.instance);
      out = solve_json(make_dlts_partial(d, LassoDomain(lasso_words(o, d))), policy, code);
      break;
    }
    case InstanceTag::DltsTotal: {
      const auto& d = expect<Dlts>(model, o.instance);
      out = solve_json(make_dlts_total(d, LassoDomain(lasso_words(o, d))), policy, code);
      break;
    }
    case InstanceTag::UfaLang: {
      const auto& n = expect<Nfa>(model, o.instance);
      out = solve_json(make_ufa_lang(n, WordDomain(n.alphabet.size(), o.maxlen)), policy, code);
      break;
    }
    case InstanceTag::UfaCount: {
      const auto& n = expect<Nfa>(model, o.instance);
      out = solve_json(make_ufa_count(n, WordDomain(n.alphabet.size(), o.maxlen)), policy, code);
      break;
    }
    case InstanceTag::UfaProbPair: {
      const auto& n = expect<Nfa>(model, o.instance);
      if (o.labels.empty()) throw UsageError("ufa_prob_pair needs --labels");
      const auto labels = label_chain(o);
      const WordDomain dom(n.alphabet.size(), o.maxlen);
      int lang_code = kOk;
      int count_code = kOk;
      const Json lang = solve_json(make_ufa_prob_lang(n, labels, dom), policy, lang_code);
      const Json count = solve_json(make_ufa_prob_count(n, labels, dom), policy, count_code);
      code = std::max(lang_code, count_code);
      out = Json{{"values", {{"lang", lang["values"]}, {"count", count["values"]}}},
                 {"scope", lang["scope"] == "exact" ? count["scope"] : lang["scope"]},
                 {"converged", lang["converged"].get<bool>() && count["converged"].get<bool>()},
                 {"steps", std::max(lang["steps"].get<std::size_t>(), count["steps"].get<std::size_t>())}};
      break;
    }
  }
  out["instance"] = o.instance;
  emit(o, out);
  return code;
}

int verdict_code(const Verdict& v) {
  if (v.holds()) return kOk;
  if (v.fails() && v.scope == Verdict::Scope::Exact) return kGrcFails;
  return kApproximate;
}

int cmd_check_grc(const Options& o) {
  const Model model = load_model_file(o.model);
  Verdict v;
  if (const auto* mc = std::get_if<MarkovChain>(&model)) {
    v = grc_mc(*mc);
  } else if (const auto* mdp = std::get_if<Mdp>(&model)) {
    v = grc_mdp(*mdp, policy_of(o), o.tol, kDefaultExplosionLimit);
  } else if (const auto* g = std::get_if<ResourceGraph>(&model)) {
    v = grc_resource(*g);
  } else if (const auto* d = std::get_if<Dlts>(&model)) {
    v = grc_dlts(*d, LassoDomain(lasso_words(o, *d)));
  } else {
    v = grc_ufa(std::get<Nfa>(model));
  }
  Json out = verdict_to_json(v);
  out["model"] = model_type_name(model);
  emit(o, out);
  return verdict_code(v);
}

int cmd_verify(const Options& o) {
  const Model model = load_model_file(o.model);
  CorrespondenceReport r;
  if (const auto* n = std::get_if<Nfa>(&model)) {
    ChainOptions opt;
    opt.max_length = o.maxlen;
    opt.tol = o.tol;
    r = o.labels.empty() ? verify_chain(*n, opt) : verify_chain_prob(*n, label_chain(o), opt);
  } else {
    VerifyOptions opt;
    opt.policy = policy_of(o);
    opt.tol = o.tol;
    std::vector<LassoWord> words;
    if (const auto* d = std::get_if<Dlts>(&model)) words = lasso_words(o, *d);
    r = verify_equivalence(model, opt, words);
  }
  emit(o, report_to_json(r));
  if (r.approximate()) return kApproximate;
  if (r.coincidence) return kOk;
  return r.grc.fails() ? kGrcFails : kNoCoincidence;
}

int cmd_oracle(const Options& o) {
  const Model model = load_model_file(o.model);
  const std::string& tag = o.oracle;
  Json values = Json::object();
  if (tag == "mc_partial" || tag == "mc_total") {
    const auto& mc = expect<MarkovChain>(model, tag);
    auto label = [&](std::size_t i) { return mc.states[i]; };
    values = tag == "mc_partial" ? valuation_json(mc_partial_oracle(mc, o.horizon), label)
                                 : valuation_json(mc_total_oracle(mc, o.horizon), label);
  } else if (tag == "mdp_pareto") {
    const auto& mdp = expect<Mdp>(model, tag);
    values = valuation_json(mdp_pareto_oracle(mdp, o.horizon), [&](std::size_t i) { return mdp.states[i]; });
  } else if (tag == "nfa_count" || tag == "nfa_prob") {
    const auto& n = expect<Nfa>(model, tag);
    const WordDomain dom(n.alphabet.size(), o.maxlen);
    MarkovChain labels;
    if (tag == "nfa_prob") {
      if (o.labels.empty()) throw UsageError("nfa_prob needs --labels");
      labels = label_chain(o);
      check_label_chain(n, labels);
    }
    for (std::size_t s = 0; s < n.size(); ++s) {
      for (std::size_t id = 0; id < dom.size(); ++id) {
        const auto word = dom.word(id);
        const std::string key = word_index_label(n.states, n.alphabet, dom, s * dom.size() + id);
        if (tag == "nfa_count") {
          values[key] = ext_nat_json(nfa_count_oracle(n, static_cast<int>(s), word));
        } else {
          const auto [count, prob] = nfa_prob_oracle(n, labels, static_cast<int>(s), word);
          values[key] = Json::array({ext_nat_json(count), ext_real_json(ExtReal(prob))});
        }
      }
    }
  } else if (tag == "dlts_run") {
    const auto& d = expect<Dlts>(model, tag);
    const auto words = lasso_words(o, d);
    const LassoDomain dom(words);
    for (std::size_t s = 0; s < d.size(); ++s) {
      for (std::size_t pos = 0; pos < dom.size(); ++pos) {
        const auto run = dlts_run_oracle(d, static_cast<int>(s), words[dom.lasso_of(pos)], dom.offset_of(pos));
        Json r = run.terminates ? Json{{"terminates", true},
                                       {"steps", run.steps},
                                       {"final_state", d.states[run.final_state]},
                                       {"safe", run.safe}}
                                : Json{{"terminates", false}, {"loops", true}};
        values[lasso_index_label(d.states, d.labels, dom, s * dom.size() + pos)] = r;
      }
    }
  } else if (tag == "resource_path") {
    const auto& g = expect<ResourceGraph>(model, tag);
    for (std::size_t s = 0; s < g.size(); ++s) values[g.states[s]] = value_json(resource_path_oracle(g, static_cast<int>(s)));
  } else {
    throw UsageError("unknown oracle \"" + tag +
                     "\" (mc_partial, mc_total, mdp_pareto, nfa_count, nfa_prob, dlts_run, resource_path)");
  }
  emit(o, Json{{"oracle", tag}, {"horizon", o.horizon}, {"values", values}});
  return kOk;
}

void error_out(const Options& o, const std::string& kind, const std::string& message) {
  if (!o.quiet) std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least fixed points of paired transition-system semantics and their correspondence."};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "model file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--tol", o.tol, "comparison tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--eps", o.epsilon, "Kleene stopping tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iter, "iteration limit");
    sub->add_option("--cap", o.cap, "values above this become inf")->check(CLI::PositiveNumber);
    sub->add_option("--maxlen", o.maxlen, "word length bound for automata");
    sub->add_option("--words", o.words, "lasso word file for dlts models");
    sub->add_option("--labels", o.labels, "label Markov chain for the probabilistic automaton pair");
    sub->add_flag("--quiet", o.quiet, "print nothing; exit code only");
  };

  auto* solve = app.add_subcommand("solve", "least fixed point of one instance");
  common(solve);
  solve->add_option("--instance", o.instance, "instance tag")->required();
  solve->add_option("--horizon", o.horizon, "stop after this many stages");

  auto* grc = app.add_subcommand("check-grc", "global reachability condition");
  common(grc);
  grc->add_option("--instance", o.instance, "instance tag (informational)");
  grc->add_option("--horizon", o.horizon, "stage bound for the frontier approximant");

  auto* verify = app.add_subcommand("verify", "compare the two least fixed points");
  common(verify);
  verify->add_option("--instance", o.instance, "instance tag (informational)");
  verify->add_option("--horizon", o.horizon, "stage bound for the concrete chain");

  auto* oracle = app.add_subcommand("oracle", "brute-force values");
  common(oracle);
  oracle->add_option("--instance,--oracle", o.oracle, "oracle tag")->required();
  oracle->add_option("--horizon", o.horizon, "path or scheduler depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }
  for (auto* sub : {solve, grc, verify}) {
    if (sub->parsed() && sub->count("--horizon") > 0) o.horizon_set = true;
  }
  if (solve->parsed() && solve->count("--tol") > 0 && solve->count("--eps") == 0) o.epsilon = o.tol;

  try {
    if (!o.instance.empty() && !oracle->parsed() && !parse_instance(o.instance)) {
      throw UsageError("unknown instance \"" + o.instance + "\"");
    }
    if (solve->parsed()) return cmd_solve(o);
    if (grc->parsed()) return cmd_check_grc(o);
    if (verify->parsed()) return cmd_verify(o);
    return cmd_oracle(o);
  } catch (const ModelError& e) {
    error_out(o, e.kind() == ModelError::Kind::Parse ? "parse" : "validation", e.what());
    return kInput;
  } catch (const UsageError& e) {
    error_out(o, "usage", e.what());
    return kInput;
  } catch (const OracleBudgetError& e) {
    error_out(o, "budget", e.what());
    return kBudget;
  } catch (const ExplosionError& e) {
    error_out(o, "budget", e.what());
    return kBudget;
  } catch (const NonConvergenceError& e) {
    error_out(o, "nonconvergence", e.what());
    return kApproximate;
  } catch (const std::exception& e) {
    error_out(o, "internal", e.what());
    return kInternal;
  }
}
