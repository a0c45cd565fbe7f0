#include "reachcorr/correspond.hpp"

#include <random>
#include <stdexcept>

namespace reachcorr {

namespace {

constexpr std::size_t kMaxListedDifferences = 20;

template <class T>
struct Solved {
  Valuation<T> value;
  std::string scope;
  std::size_t steps = 0;
};

template <Lattice L>
Solved<typename L::value_type> solve(const Operator<L>& op, const ConvergencePolicy& policy) {
  using T = typename L::value_type;
  try {
    const auto trace = kleene_lfp(op, policy, false);
    std::string scope = trace.scope();
    if (trace.converged && chain_scope(op.lattice, trace) == Verdict::Scope::Exact) scope = "exact";
    return {trace.last(), scope, trace.steps};
  } catch (const NonConvergence<T>& e) {
    return {e.last(), "approximate", e.steps()};
  }
}

std::string combine_scope(const std::string& a, const std::string& b) {
  if (a == "approximate" || b == "approximate") return "approximate";
  if (a == "exact") return b;
  return a;
}

ConvergencePolicy finite_height_policy(std::size_t size, std::size_t height) {
  return ConvergencePolicy::exact(size * height + 2);
}

template <GaloisConnection G>
void compare(CorrespondenceReport& r, const G& g, const Valuation<ConcreteValue<G>>& mu_c,
             const Valuation<AbstractValue<G>>& mu_a, const std::function<std::string(std::size_t)>& label,
             double tol) {
  const auto lowered = apply_lower(g, mu_c);
  const auto raised = apply_upper(g, mu_a);
  r.deviation_lower = max_distance(g.abstract(), lowered, mu_a);
  r.deviation_upper = max_distance(g.concrete(), raised, mu_c);
  r.deviation = max(r.deviation_lower, r.deviation_upper);
  const bool lower_ok = equal(g.abstract(), lowered, mu_a, tol);
  const bool upper_ok = equal(g.concrete(), raised, mu_c, tol);
  r.coincidence = lower_ok && upper_ok;
  r.conditions.push_back({"lower(concrete lfp) = abstract lfp", lower_ok,
                          "max deviation " + r.deviation_lower.to_string()});
  r.conditions.push_back({"upper(abstract lfp) = concrete lfp", upper_ok,
                          "max deviation " + r.deviation_upper.to_string()});
  for (std::size_t i = 0; i < mu_c.size() && r.witnesses.size() < kMaxListedDifferences; ++i) {
    if (!g.abstract().equal(lowered[i], mu_a[i], tol) || !g.concrete().equal(raised[i], mu_c[i], tol)) {
      r.witnesses.push_back(label(i));
    }
  }
  r.values = Json{{"concrete", valuation_json(mu_c, label)},
                  {"abstract", valuation_json(mu_a, label)},
                  {"lowered", valuation_json(lowered, label)},
                  {"raised", valuation_json(raised, label)}};
}

void finish(CorrespondenceReport& r) {
  if (r.grc.fails() && r.coincidence) r.flags.push_back("coincidence without GRC");
  if (r.grc.holds() && !r.coincidence) r.flags.push_back("GRC holds without coincidence");
  if (r.approximate()) r.flags.push_back("approximate fixed point");
}

/// L(Phi^i bot) = (L Phi R)^i bot for every stage up to `stages`.
template <GaloisConnection G, Lattice LC, Lattice LA>
Condition stage_condition(const Operator<LC>& concrete, const Operator<LA>& abstract, const G& g, std::size_t stages) {
  const auto pair = chain_pair(concrete, abstract, g, stages);
  for (std::size_t i = 0; i <= stages; ++i) {
    if (!equal(g.abstract(), pair.lowered[i], pair.abstract[i], 0.0)) {
      return {"stagewise lower(Phi^i bot) = (L Phi R)^i bot", false, "first mismatch at stage " + std::to_string(i)};
    }
  }
  return {"stagewise lower(Phi^i bot) = (L Phi R)^i bot", true, "stages 0.." + std::to_string(stages)};
}

ExtNat sample_count(std::mt19937_64& rng) {
  static constexpr std::uint64_t kValues[] = {0, 1, 2, 3};
  const auto pick = std::uniform_int_distribution<int>(0, 4)(rng);
  return pick == 4 ? ExtNat::infinity() : ExtNat(kValues[pick]);
}

ExtReal sample_weight(std::mt19937_64& rng) {
  static constexpr double kValues[] = {0.0, 0.125, 0.25, 0.5, 1.0, 1.5, 3.0};
  const auto pick = std::uniform_int_distribution<int>(0, 7)(rng);
  return pick == 7 ? ExtReal::infinity() : ExtReal(kValues[pick]);
}

}  // namespace

Json report_to_json(const CorrespondenceReport& r) {
  Json conditions = Json::array();
  for (const auto& c : r.conditions) {
    conditions.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return Json{{"instance", r.instance},
              {"grc", verdict_to_json(r.grc)},
              {"checked_object", r.checked_object},
              {"coincidence", r.coincidence},
              {"deviation", ext_real_json(r.deviation)},
              {"deviation_lower", ext_real_json(r.deviation_lower)},
              {"deviation_upper", ext_real_json(r.deviation_upper)},
              {"scope", r.scope},
              {"flags", r.flags},
              {"conditions", conditions},
              {"witnesses", r.witnesses},
              {"values", r.values}};
}

CorrespondenceReport verify_mc(const MarkovChain& mc, const VerifyOptions& opt) {
  CorrespondenceReport r;
  r.instance = "mc";
  r.checked_object = "mu Phi (partial expected reward) vs mu Psi (total expected reward, linear solve)";
  r.grc = grc_mc(mc);
  const auto op = make_mc_partial(mc);
  const auto concrete = solve(op, opt.policy);
  const auto abstract = mc_total_exact(mc);
  r.scope = combine_scope(concrete.scope, "exact");
  compare(r, ProbRewardConnection{}, concrete.value, abstract, op.label, opt.tol);
  finish(r);
  return r;
}

CorrespondenceReport verify_resource(const ResourceGraph& g, const VerifyOptions& opt) {
  CorrespondenceReport r;
  r.instance = "resource";
  r.checked_object = "mu Phi (capped resource sums) vs mu (L Phi R) (plain reachability)";
  r.grc = grc_resource(g);
  const auto concrete_op = make_resource(g);
  const auto abstract_op = make_resource_reach(g);
  const auto policy = finite_height_policy(g.size(), static_cast<std::size_t>(g.bound) + 2);
  const auto concrete = solve(concrete_op, policy);
  const auto abstract = solve(abstract_op, policy);
  r.scope = combine_scope(concrete.scope, abstract.scope);
  const ResourceConnection conn(g.bound);
  compare(r, conn, concrete.value, abstract.value, concrete_op.label, opt.tol);
  r.conditions.push_back(stage_condition(concrete_op, abstract_op, conn, std::max(concrete.steps, abstract.steps)));
  finish(r);
  return r;
}

CorrespondenceReport verify_dlts(const Dlts& d, const LassoDomain& dom, const VerifyOptions& opt) {
  CorrespondenceReport r;
  r.instance = "dlts";
  r.checked_object = "mu Phi_c (partial correctness) vs mu (L Phi_c R) (total correctness) on lasso suffixes";
  r.grc = grc_dlts(d, dom);
  const auto concrete_op = make_dlts_partial(d, dom);
  const auto abstract_op = make_dlts_total(d, dom);
  const auto policy = finite_height_policy(concrete_op.size, 4);
  const auto concrete = solve(concrete_op, policy);
  const auto abstract = solve(abstract_op, policy);
  r.scope = combine_scope(concrete.scope, abstract.scope);
  const Lex2Connection conn;
  compare(r, conn, concrete.value, abstract.value, concrete_op.label, opt.tol);
  r.conditions.push_back(stage_condition(concrete_op, abstract_op, conn, std::max(concrete.steps, abstract.steps)));
  finish(r);
  return r;
}

CorrespondenceReport verify_mdp(const Mdp& mdp, const VerifyOptions& opt) {
  CorrespondenceReport r;
  r.instance = "mdp";
  r.checked_object = "f: limit of the frontier chain from {(0,0)} vs mu (L Phi R) (maximal total expected reward)";
  const auto chain = mdp_frontier_chain(mdp, opt.policy, opt.explosion_limit);
  r.grc = grc_mdp(mdp, chain, opt.tol);
  const auto op = make_mdp_partial(mdp, opt.explosion_limit);
  Solved<ParetoFrontier> concrete{chain.trace.last(), chain.trace.scope(), chain.trace.steps};
  if (chain.trace.converged && chain_scope(op.lattice, chain.trace) == Verdict::Scope::Exact) concrete.scope = "exact";
  if (chain.exploded) r.flags.push_back("frontier chain stopped by the explosion limit");
  Solved<ExtReal> abstract;
  try {
    const auto trace = mdp_total_lfp(mdp, opt.policy);
    abstract = {trace.last(), trace.scope(), trace.steps};
  } catch (const NonConvergence<ExtReal>& e) {
    abstract = {e.last(), "approximate", e.steps()};
  }
  r.scope = combine_scope(concrete.scope, abstract.scope);
  compare(r, FrontierConnection{}, concrete.value, abstract.value, op.label, opt.tol);
  finish(r);
  return r;
}

CorrespondenceReport verify_equivalence(const Model& model, const VerifyOptions& opt,
                                        const std::vector<LassoWord>& words) {
  if (const auto* mc = std::get_if<MarkovChain>(&model)) return verify_mc(*mc, opt);
  if (const auto* mdp = std::get_if<Mdp>(&model)) return verify_mdp(*mdp, opt);
  if (const auto* g = std::get_if<ResourceGraph>(&model)) return verify_resource(*g, opt);
  if (const auto* d = std::get_if<Dlts>(&model)) return verify_dlts(*d, LassoDomain(words), opt);
  throw std::invalid_argument("verify_equivalence does not cover " + model_type_name(model) +
                              " models; use verify_chain");
}

CorrespondenceReport verify_chain(const Nfa& n, const ChainOptions& opt) {
  CorrespondenceReport r;
  r.instance = "ufa";
  const WordDomain dom(n.alphabet.size(), opt.max_length);
  r.checked_object = "i(mu Phi) vs mu Psi on words up to length " + std::to_string(opt.max_length);
  const auto lang = make_ufa_lang(n, dom);
  const auto count = make_ufa_count(n, dom);
  const CountingConnection conn;

  // (1) Phi R = R Psi on sampled valuations.
  std::mt19937_64 rng(opt.seed);
  bool commutes = true;
  std::size_t sample = 0;
  for (; sample < opt.samples && commutes; ++sample) {
    std::vector<ExtNat> k(count.size);
    for (auto& x : k) x = sample_count(rng);
    const Valuation<ExtNat> kv(std::move(k));
    commutes = lang(apply_upper(conn, kv)) == apply_upper(conn, count(kv));
  }
  r.conditions.push_back({"Phi R = R Psi", commutes,
                          commutes ? std::to_string(opt.samples) + " sampled valuations"
                                   : "fails on sample " + std::to_string(sample)});

  // (2) Psi's chain is stationary after max_length + 1 stages.
  const auto mu_psi = solve(count, ConvergencePolicy::exact(opt.max_length + 2));
  const bool stationary = mu_psi.scope == "exact";
  r.conditions.push_back({"Psi chain stationary", stationary,
                          "fixed point reached at stage " + std::to_string(mu_psi.steps - (stationary ? 1 : 0))});

  // (3) mu Psi in Fix(epsilon).
  r.grc = grc_ufa(n);
  const bool bounded_fix = in_fix_counit(conn, mu_psi.value, 0.0);
  r.conditions.push_back({"mu Psi in Fix(epsilon)", r.grc.holds() && bounded_fix,
                          std::string("unambiguity ") + (r.grc.holds() ? "holds" : "fails") +
                              "; counts <= 1 on the domain: " + (bounded_fix ? "yes" : "no")});

  const auto mu_phi = solve(lang, ConvergencePolicy::exact(opt.max_length + 2));
  r.scope = combine_scope(mu_phi.scope, mu_psi.scope);
  compare(r, conn, mu_phi.value, mu_psi.value, lang.label, 0.0);
  finish(r);
  return r;
}

CorrespondenceReport verify_chain_prob(const Nfa& n, const MarkovChain& labels, const ChainOptions& opt) {
  check_label_chain(n, labels);
  CorrespondenceReport r;
  r.instance = "ufa_prob";
  const WordDomain dom(n.alphabet.size(), opt.max_length);
  r.checked_object = "(i x incl)(mu Phi) vs mu Psi on words up to length " + std::to_string(opt.max_length);
  const auto lang = make_ufa_prob_lang(n, labels, dom);
  const auto count = make_ufa_prob_count(n, labels, dom);
  const WeightedCountingConnection conn;

  std::mt19937_64 rng(opt.seed);
  bool commutes = true;
  std::size_t sample = 0;
  for (; sample < opt.samples && commutes; ++sample) {
    std::vector<CountReward> k(count.size);
    for (auto& x : k) x = {sample_count(rng), sample_weight(rng)};
    const Valuation<CountReward> kv(std::move(k));
    commutes = equal(conn.concrete(), lang(apply_upper(conn, kv)), apply_upper(conn, count(kv)), opt.tol);
  }
  r.conditions.push_back({"Phi R = R Psi", commutes,
                          commutes ? std::to_string(opt.samples) + " sampled valuations"
                                   : "fails on sample " + std::to_string(sample) + "; not required for the direct check"});
  if (!commutes) r.flags.push_back("Phi R = R Psi fails for this pair");

  const auto mu_psi = solve(count, ConvergencePolicy::exact(opt.max_length + 2));
  const bool stationary = mu_psi.scope == "exact";
  r.conditions.push_back({"Psi chain stationary", stationary,
                          "fixed point reached at stage " + std::to_string(mu_psi.steps - (stationary ? 1 : 0))});

  r.grc = grc_ufa(n);
  const bool bounded_fix = in_fix_counit(conn, mu_psi.value, opt.tol);
  r.conditions.push_back({"mu Psi in Fix(epsilon)", r.grc.holds() && bounded_fix,
                          std::string("unambiguity ") + (r.grc.holds() ? "holds" : "fails") +
                              "; counit fixed on the domain: " + (bounded_fix ? "yes" : "no")});

  const auto mu_phi = solve(lang, ConvergencePolicy::exact(opt.max_length + 3));
  r.scope = combine_scope(mu_phi.scope, mu_psi.scope);
  compare(r, conn, mu_phi.value, mu_psi.value, lang.label, opt.tol);
  finish(r);
  return r;
}

}  // namespace reachcorr
