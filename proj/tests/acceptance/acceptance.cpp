// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "laws.hpp"
#include "reachcorr/correspond.hpp"
#include "reachcorr/operators.hpp"
#include "reachcorr/oracle.hpp"
#include "reachcorr/reachability.hpp"
#include "reachcorr/solver.hpp"

using namespace reachcorr;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // <= 0: no runtime bound
  std::function<void(Outcome&)> body;
};

std::vector<LassoWord> words_of(const Dlts& d, const std::string& name) {
  return load_lasso_words(corpus::read_text(corpus::data_path(name)), d.labels);
}

template <Lattice L>
Valuation<typename L::value_type> iterate(const Operator<L>& op, std::size_t n) {
  auto v = op.bottom();
  for (std::size_t i = 0; i < n; ++i) v = op(v);
  return v;
}

bool close(ExtReal a, ExtReal b, double tol) { return abs_diff(a, b) <= ExtReal(tol); }

// --- 1 ------------------------------------------------------------------------

void coincidence_on_reachable_chains(Outcome& o) {
  auto mcs = corpus::reachable_mcs(20, 1001);
  mcs.push_back(corpus::load_as<MarkovChain>("geom.json"));
  for (std::size_t i = 0; i < mcs.size(); ++i) {
    const auto& mc = mcs[i];
    const auto phi = kleene_lfp(make_mc_partial(mc), ConvergencePolicy::tolerance(1e-12), false);
    const auto psi = mc_total_exact(mc);
    o.require(phi.converged, "chain " + std::to_string(i) + " did not converge");
    o.require(grc_mc(mc).holds(), "chain " + std::to_string(i) + " is not almost surely reaching");
    for (std::size_t s = 0; s < mc.size(); ++s) {
      const auto& [p, r] = phi.last()[s];
      o.require(close(r, psi[s], 1e-6), "pi2 mu Phi != mu Psi at chain " + std::to_string(i));
      o.require(std::abs(p - 1.0) <= 1e-6, "mu Phi != <1, mu Psi> at chain " + std::to_string(i));
    }
  }
  o.detail << mcs.size() << " chains";
}

// --- 2 ------------------------------------------------------------------------

void negative_control(Outcome& o) {
  std::vector<Model> models;
  for (auto& mc : corpus::trap_mcs(5, 1002)) models.emplace_back(std::move(mc));
  models.push_back(corpus::load("trap.json"));
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto r = verify_equivalence(models[i]);
    o.require(r.grc.fails(), "trap chain " + std::to_string(i) + ": GRC not failing");
    o.require(!r.coincidence, "trap chain " + std::to_string(i) + ": coincidence reported");
    o.require(r.deviation.is_infinite(), "trap chain " + std::to_string(i) + ": deviation finite");
  }
  o.detail << models.size() << " trap chains, deviation inf";
}

// --- 3 ------------------------------------------------------------------------

void frontier_chain_vs_schedulers(Outcome& o) {
  const auto mdps = corpus::tiny_mdps(25, 1003);
  std::size_t compared = 0;
  for (std::size_t i = 0; i < mdps.size(); ++i) {
    const auto op = make_mdp_partial(mdps[i]);
    auto v = op.bottom();
    for (std::size_t n = 0; n <= 4; ++n) {
      const auto oracle = mdp_pareto_oracle(mdps[i], n);
      for (std::size_t s = 0; s < mdps[i].size(); ++s) {
        ++compared;
        o.require(frontier_equal(v[s], oracle[s], 1e-9),
                  "mdp " + std::to_string(i) + " n=" + std::to_string(n) + " state " + mdps[i].states[s]);
      }
      v = op(v);
    }
  }
  o.detail << mdps.size() << " MDPs, " << compared << " frontiers";
}

// --- 4 ------------------------------------------------------------------------

void two_choice_correspondence(Outcome& o) {
  const auto two = corpus::load_as<Mdp>("two_choice.json");
  const auto policy = ConvergencePolicy::tolerance(1e-10);
  o.require(grc_mdp(two, policy, 1e-6).holds(), "two-choice GRC does not hold");
  const auto limit = kleene_lfp(make_mdp_partial(two), policy, false);
  const auto& f = limit.last()[0];
  o.require(f.size() == 1 && std::abs(f.points()[0].prob - 1.0) <= 1e-6 &&
                close(f.points()[0].reward, ExtReal(10.0), 1e-6),
            "frontier limit is not {(1, 10)}");
  const auto total = mdp_total_lfp(two, policy);
  o.require(close(total.last()[0], ExtReal(10.0), 1e-6), "mu(L Phi R) != 10");
  o.require(verify_mdp(two).coincidence, "two-choice report without coincidence");

  const auto trap = verify_mdp(corpus::load_as<Mdp>("trap_choice.json"));
  o.require(trap.grc.fails(), "trap-choice GRC does not fail");
  o.require(!trap.coincidence, "trap-choice report claims coincidence");
  o.detail << "frontier " << frontier_to_string(f) << ", total " << total.last()[0].to_string();
}

// --- 5 ------------------------------------------------------------------------

void resource_graphs(Outcome& o) {
  auto graphs = corpus::resource_graphs(40, 1005);
  graphs.push_back(corpus::load_as<ResourceGraph>("resource_chain.json"));
  graphs.push_back(corpus::load_as<ResourceGraph>("resource_unreachable.json"));
  std::size_t passing = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& g = graphs[i];
    const ResourceConnection rc(g.bound);
    const auto mu = kleene_lfp(make_resource(g), ConvergencePolicy::exact(g.size() * (g.bound + 2))).last();
    for (std::size_t s = 0; s < g.size(); ++s) {
      o.require(mu[s] == resource_path_oracle(g, static_cast<int>(s)), "graph " + std::to_string(i) + " differs from paths");
    }
    const bool holds = grc_resource(g).holds();
    o.require(holds == in_fix_unit(rc, mu, 0.0), "graph " + std::to_string(i) + ": GRC differs from the unit test");
    if (!holds) continue;
    ++passing;
    const auto reach = kleene_lfp(make_resource_reach(g), ConvergencePolicy::exact(g.size() + 2)).last();
    for (std::size_t s = 0; s < g.size(); ++s) {
      o.require(reach[s] == (mu[s] == BoundedNat::of(g.bound)), "graph " + std::to_string(i) + ": reachable != (mu = M)");
    }
  }
  o.detail << graphs.size() << " graphs, " << passing << " GRC-passing";
}

// --- 6 ------------------------------------------------------------------------

void unambiguous_automata(Outcome& o) {
  auto nfas = corpus::nfas(30, 1006);
  for (const char* name : {"nfa_unambiguous.json", "nfa_ambiguous.json", "nfa_empty.json"}) {
    nfas.push_back(corpus::load_as<Nfa>(name));
  }
  const CountingConnection cc;
  std::size_t unambiguous = 0;
  std::size_t ambiguous = 0;
  for (std::size_t i = 0; i < nfas.size(); ++i) {
    const auto& n = nfas[i];
    const std::string tag = "nfa " + std::to_string(i);
    const bool bounded = nfa_max_run_count(n, 2 * n.size() * n.size()) <= 1;
    const bool holds = grc_ufa(n).holds();
    o.require(holds == bounded, tag + ": squaring disagrees with counting");
    if (holds) {
      ++unambiguous;
      const WordDomain dom(n.alphabet.size(), 4);
      const auto lang = iterate(make_ufa_lang(n, dom), dom.max_length() + 1);
      const auto count = iterate(make_ufa_count(n, dom), dom.max_length() + 1);
      o.require(apply_lower(cc, lang) == count, tag + ": i(mu Phi) != mu Psi");
    } else {
      ++ambiguous;
      const auto w = find_ambiguity(n);
      o.require(w.has_value(), tag + ": no witness");
      if (!w) continue;
      o.require(ExtNat(2) <= nfa_count_oracle(n, w->state, w->word), tag + ": witness count below 2");
      if (w->word.size() <= 8) {
        o.require(nfa_enumerate_runs(n, w->state, w->word).size() >= 2, tag + ": enumeration finds < 2 runs");
      }
    }
  }
  corpus::Rng rng(1016);
  for (int t = 0; t < 500; ++t) {
    const auto& n = nfas[static_cast<std::size_t>(t) % nfas.size()];
    const WordDomain dom(n.alphabet.size(), 4);
    const auto k = corpus::sample_valuation<ExtNat>(n.size() * dom.size(), [&] { return corpus::sample_ext_nat(rng); });
    o.require(step_ufa_lang(n, dom, apply_upper(cc, k)) == apply_upper(cc, step_ufa_count(n, dom, k)),
              "Phi R != R Psi on sample " + std::to_string(t));
  }
  o.detail << unambiguous << " unambiguous, " << ambiguous << " ambiguous, 500 samples";
}

// --- 7 ------------------------------------------------------------------------

void dlts_correctness(Outcome& o) {
  const Lex2Connection lc;
  const auto term = corpus::load_as<Dlts>("dlts_terminating.json");
  const LassoDomain tdom(words_of(term, "dlts_terminating_words.json"));
  o.require(grc_dlts(term, tdom).holds(), "terminating fixture: GRC does not hold");
  const std::size_t th = term.size() * tdom.size() * 4 + 2;
  const auto tphi = kleene_lfp(make_dlts_partial(term, tdom), ConvergencePolicy::exact(th)).last();
  const auto tpsi = kleene_lfp(make_dlts_total(term, tdom), ConvergencePolicy::exact(th)).last();
  o.require(apply_lower(lc, tphi) == tpsi, "terminating fixture: L(mu Phi) != mu(L Phi R)");

  const auto loop = corpus::load_as<Dlts>("dlts_looping.json");
  const LassoDomain ldom(words_of(loop, "dlts_looping_words.json"));
  o.require(grc_dlts(loop, ldom).fails(), "looping fixture: GRC does not fail");
  const std::size_t lh = loop.size() * ldom.size() * 4 + 2;
  const auto lphi = kleene_lfp(make_dlts_partial(loop, ldom), ConvergencePolicy::exact(lh)).last();
  const auto lpsi = kleene_lfp(make_dlts_total(loop, ldom), ConvergencePolicy::exact(lh)).last();
  std::size_t at = ldom.size();
  for (std::size_t p = 0; p < ldom.size(); ++p) {
    if (lasso_suffix_to_string(ldom, p, loop.labels) == "(a)^w") at = p;
  }
  o.require(at < ldom.size(), "looping fixture: no a^w lasso");
  if (at < ldom.size()) {
    o.require(lphi[at] == Lex2{false, true}, "looping pair: partial correctness is not (bot, top)");
    o.require(!lpsi[at], "looping pair: total correctness is not bot");
  }

  corpus::Rng rng(1017);
  const auto cases = corpus::dlts_cases(50, 1007);
  for (int t = 0; t < 500; ++t) {
    const auto& c = cases[static_cast<std::size_t>(t) % cases.size()];
    const LassoDomain dom(c.words);
    const auto k = corpus::sample_valuation<Lex2>(c.dlts.size() * dom.size(), [&] { return corpus::sample_lex2(rng); });
    o.require(apply_lower(lc, step_dlts_partial(c.dlts, dom, k)) == step_dlts_total(c.dlts, dom, apply_lower(lc, k)),
              "completeness fails on sample " + std::to_string(t));
  }
  o.detail << "fixtures checked, 500 samples";
}

// --- 8 ------------------------------------------------------------------------

void lift_identities(Outcome& o) {
  corpus::Rng rng(1018);
  const FrontierConnection fc;
  const ProbRewardConnection pr;
  const auto partial = lift_partial(step_mc_partial);
  const auto total = lift_total(step_mc_partial);
  const auto mdps = corpus::tiny_mdps(100, 1008);
  for (std::size_t i = 0; i < mdps.size(); ++i) {
    const auto& mdp = mdps[i];
    const std::string tag = "pair " + std::to_string(i);
    const auto kf = corpus::sample_valuation<ParetoFrontier>(mdp.size(), [&] { return corpus::sample_frontier(rng); });
    o.require(partial(mdp, kf) == step_mdp_partial(mdp, kf), tag + ": lift_partial != step_mdp_partial");
    const auto v = corpus::sample_valuation<ExtReal>(mdp.size(), [&] { return corpus::sample_ext_real(rng); });
    o.require(equal(ExtRealLattice{}, total(mdp, v), step_mdp_total(mdp, v), 1e-9),
              tag + ": lift_total != step_mdp_total");

    // Collapse: the join of the lifted step on embedded inputs is the
    // componentwise best of the chain step over all resolutions.
    const auto lifted = partial(mdp, apply_upper(fc, v));
    std::vector<std::size_t> choice(mdp.size(), 0);
    std::vector<ProbReward> best(mdp.size(), {0.0, ExtReal()});
    for (;;) {
      const auto img = step_mc_partial(resolve_choices(mdp, choice), apply_upper(pr, v));
      for (std::size_t s = 0; s < mdp.size(); ++s) {
        best[s] = {std::max(best[s].first, img[s].first), max(best[s].second, img[s].second)};
      }
      std::size_t j = 0;
      while (j < choice.size() && ++choice[j] == mdp.choices[j].size()) choice[j++] = 0;
      if (j == choice.size()) break;
    }
    for (std::size_t s = 0; s < mdp.size(); ++s) {
      const auto top = frontier_sup(lifted[s]);
      o.require(std::abs(top.prob - best[s].first) <= 1e-9 && close(top.reward, best[s].second, 1e-9),
                tag + ": collapse identity fails");
    }
    o.require(equal(fc.abstract(), apply_lower(fc, lifted), total(mdp, v), 1e-9), tag + ": (pi2 . sup) relation fails");
  }
  o.detail << mdps.size() << " pairs";
}

// --- 9 ------------------------------------------------------------------------

void connection_laws(Outcome& o) {
  corpus::Rng rng(1019);
  auto boolean = [&] { return corpus::sample_bool(rng); };
  auto ext_real = [&] { return corpus::sample_ext_real(rng); };
  auto ext_nat = [&] { return corpus::sample_ext_nat(rng); };
  std::size_t connections = 0;
  auto record = [&](const std::string& name, const laws::LawReport& r) {
    ++connections;
    for (const auto& f : r.failures) o.require(false, name + ": " + f);
  };
  record("prob/reward", laws::check_connection(
                            ProbRewardConnection{},
                            [&] { return ProbReward{corpus::sample_unit(rng), corpus::sample_ext_real(rng)}; },
                            ext_real, 1000));
  record("frontier", laws::check_connection(FrontierConnection{}, [&] { return corpus::sample_frontier(rng); },
                                            ext_real, 1000));
  for (int m = 1; m <= 5; ++m) {
    record("resource M=" + std::to_string(m),
           laws::check_connection(ResourceConnection(m), [&] { return corpus::sample_bounded(rng, m); }, boolean, 1000));
  }
  record("lex2", laws::check_connection(Lex2Connection{}, [&] { return corpus::sample_lex2(rng); }, boolean, 1000));
  record("counting", laws::check_connection(CountingConnection{}, boolean, ext_nat, 1000));
  record("weighted counting",
         laws::check_connection(
             WeightedCountingConnection{}, [&] { return BoolProb{corpus::sample_bool(rng), corpus::sample_unit(rng)}; },
             [&] { return CountReward{corpus::sample_ext_nat(rng), corpus::sample_ext_real(rng)}; }, 1000));
  o.detail << connections << " connections x 1000 samples";
}

// --- 10 -----------------------------------------------------------------------

void soundness_sweep(Outcome& o) {
  std::size_t reports = 0;
  std::size_t grc_holds = 0;
  std::size_t approximate = 0;
  auto account = [&](const std::string& what, const CorrespondenceReport& r) {
    ++reports;
    if (r.grc.holds()) ++grc_holds;
    if (r.approximate()) ++approximate;
    o.require(!r.soundness_violation(), what + ": GRC holds without coincidence");
  };
  for (const auto& mc : corpus::reachable_mcs(20, 1001)) account("reachable chain", verify_mc(mc));
  for (const auto& mc : corpus::trap_mcs(5, 1002)) account("trap chain", verify_mc(mc));
  for (const auto& mdp : corpus::tiny_mdps(25, 1003)) account("tiny mdp", verify_mdp(mdp));
  for (const auto& mdp : corpus::tiny_mdps(100, 1008)) account("lift mdp", verify_mdp(mdp));
  for (const auto& g : corpus::resource_graphs(40, 1005)) account("resource graph", verify_resource(g));
  for (const auto& n : corpus::nfas(30, 1006)) account("nfa", verify_chain(n));
  const auto labels = corpus::load_as<MarkovChain>("labels_ab.json");
  for (const auto& n : corpus::nfas(30, 1006, 4)) account("weighted nfa", verify_chain_prob(n, labels));
  for (const auto& c : corpus::dlts_cases(50, 1007)) account("dlts", verify_dlts(c.dlts, LassoDomain(c.words)));

  for (const char* name : {"geom.json", "trap.json", "leak.json", "two_choice.json", "trap_choice.json",
                           "mdp_branching.json", "resource_chain.json", "resource_unreachable.json"}) {
    account(name, verify_equivalence(corpus::load(name)));
  }
  for (const char* name : {"dlts_terminating", "dlts_looping"}) {
    const auto d = corpus::load_as<Dlts>(std::string(name) + ".json");
    account(name, verify_dlts(d, LassoDomain(words_of(d, std::string(name) + "_words.json"))));
  }
  for (const char* name : {"nfa_unambiguous.json", "nfa_ambiguous.json", "nfa_empty.json"}) {
    const auto n = corpus::load_as<Nfa>(name);
    account(name, verify_chain(n));
    account(name, verify_chain_prob(n, labels));
  }
  o.detail << reports << " reports, " << grc_holds << " with GRC holding, " << approximate << " approximate";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "chain coincidence under almost-sure reachability", 1.0, coincidence_on_reachable_chains},
      {2, "trap chains: GRC fails, deviation inf", 1.0, negative_control},
      {3, "frontier chain equals scheduler enumeration", 30.0, frontier_chain_vs_schedulers},
      {4, "two-choice and trap-choice MDPs", 5.0, two_choice_correspondence},
      {5, "resource-bounded reachability", 1.0, resource_graphs},
      {6, "unambiguous automata and run counting", 10.0, unambiguous_automata},
      {7, "partial and total correctness", 2.0, dlts_correctness},
      {8, "lifted MDP operators", 10.0, lift_identities},
      {9, "Galois connection laws", 1.0, connection_laws},
      {10, "soundness sweep over the corpus", 0.0, soundness_sweep},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      std::ostringstream msg;
      msg << "runtime " << secs << " s over " << c.budget_seconds << " s";
      o.require(false, msg.str());
    }
    std::string line = (o.pass ? "PASS" : "FAIL") + std::string(" [") + std::to_string(c.id) + "] " + c.name;
    char timing[64];
    std::snprintf(timing, sizeof timing, " (%.3f s)", secs);
    line += timing;
    if (!o.detail.str().empty()) line += ": " + o.detail.str();
    for (const auto& p : o.problems) line += "; " + p;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
