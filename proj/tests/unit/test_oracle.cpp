#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "reachcorr/operators.hpp"
#include "reachcorr/oracle.hpp"
#include "reachcorr/solver.hpp"

using namespace reachcorr;

namespace {

template <Lattice L>
Valuation<typename L::value_type> iterate(const Operator<L>& op, std::size_t n) {
  auto v = op.bottom();
  for (std::size_t i = 0; i < n; ++i) v = op(v);
  return v;
}

}  // namespace

TEST_CASE("chain path oracles") {
  const auto geom = corpus::load_as<MarkovChain>("geom.json");
  CHECK(mc_partial_oracle(geom, 0)[0] == ProbReward{0.0, 0.0});
  CHECK(mc_partial_oracle(geom, 1)[0] == ProbReward{0.5, 0.5});
  const auto three = mc_partial_oracle(geom, 3)[0];
  CHECK(three.first == 0.875);
  CHECK(three == step_mc_partial(geom, step_mc_partial(geom, step_mc_partial(geom, {{0.0, 0.0}}))).entries()[0]);
  CHECK(mc_total_oracle(geom, 1)[0] == ExtReal(1.0));
  CHECK(mc_total_oracle(geom, 2)[0] == ExtReal(1.5));
  CHECK(mc_total_oracle(geom, 40)[0].value() == doctest::Approx(2.0));
  CHECK(mc_total_oracle(corpus::load_as<MarkovChain>("trap.json"), 7)[0] == ExtReal(7.0));

  MarkovChain zero = geom;
  zero.rewards = {0};
  for (std::size_t n = 0; n < 6; ++n) CHECK(mc_total_oracle(zero, n)[0] == ExtReal(0.0));
}

TEST_CASE("chain oracles match the solver chain exactly") {
  for (const auto& mc : corpus::reachable_mcs(40, 301)) {
    const auto partial = make_mc_partial(mc);
    const auto total = make_mc_total(mc);
    for (std::size_t n = 0; n <= 6; ++n) {
      CHECK(mc_partial_oracle(mc, n) == iterate(partial, n));
      CHECK(mc_total_oracle(mc, n) == iterate(total, n));
    }
  }
  for (const auto& mc : corpus::trap_mcs(20, 302)) {
    for (std::size_t n = 0; n <= 5; ++n) CHECK(mc_partial_oracle(mc, n) == iterate(make_mc_partial(mc), n));
  }
}

TEST_CASE("path budget") {
  MarkovChain wide;
  wide.states = {"a", "b"};
  wide.transitions = {Distribution{{{kTarget, 0.25}, {0, 0.25}, {1, 0.5}}},
                      Distribution{{{kTarget, 0.25}, {0, 0.25}, {1, 0.5}}}};
  wide.rewards = {1, 1};
  CHECK_THROWS_AS(mc_partial_oracle(wide, 30, 1000), OracleBudgetError);
  CHECK_THROWS_AS(mc_total_oracle(wide, 30, 1000), OracleBudgetError);
  CHECK_NOTHROW(mc_partial_oracle(wide, 3, 1000));
}

TEST_CASE("scheduler oracle") {
  const auto two = corpus::load_as<Mdp>("two_choice.json");
  CHECK(mdp_pareto_oracle(two, 0)[0] == ParetoFrontier::origin());
  CHECK(mdp_pareto_oracle(two, 1)[0] == ParetoFrontier({{1.0, 0.0}, {0.5, 2.5}}));
  for (const auto& mc : corpus::reachable_mcs(20, 303, 4)) {
    const auto f = mdp_pareto_oracle(embed_mc_as_mdp(mc), 3);
    const auto p = mc_partial_oracle(mc, 3);
    for (std::size_t s = 0; s < mc.size(); ++s) {
      CHECK(f[s] == ParetoFrontier::principal({p[s].first, p[s].second}));
    }
  }
  CHECK(count_scheduler_prefixes(two, 0) == std::vector<std::size_t>{1});
  CHECK(count_scheduler_prefixes(two, 1) == std::vector<std::size_t>{2});
  CHECK(count_scheduler_prefixes(two, 2) == std::vector<std::size_t>{3});
  CHECK_THROWS_AS(mdp_pareto_oracle(two, 30, 10), OracleBudgetError);
}

TEST_CASE("frontier chain equals the scheduler oracle") {
  for (const auto& mdp : corpus::tiny_mdps(30, 304)) {
    const auto op = make_mdp_partial(mdp);
    auto v = op.bottom();
    for (std::size_t n = 0; n <= 4; ++n) {
      const auto o = mdp_pareto_oracle(mdp, n);
      for (std::size_t s = 0; s < mdp.size(); ++s) CHECK(frontier_equal(v[s], o[s], 1e-9));
      v = op(v);
    }
  }
}

TEST_CASE("oracles ascend with the horizon") {
  for (const auto& mc : corpus::trap_mcs(20, 305)) {
    const ProbRewardLattice pr;
    for (std::size_t n = 0; n < 6; ++n) {
      CHECK(leq(pr, mc_partial_oracle(mc, n), mc_partial_oracle(mc, n + 1)));
      CHECK(leq(ExtRealLattice{}, mc_total_oracle(mc, n), mc_total_oracle(mc, n + 1)));
    }
  }
  for (const auto& mdp : corpus::tiny_mdps(15, 306)) {
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(leq(FrontierLattice{}, mdp_pareto_oracle(mdp, n), mdp_pareto_oracle(mdp, n + 1)));
    }
  }
}

TEST_CASE("run counting") {
  const auto amb = corpus::load_as<Nfa>("nfa_ambiguous.json");
  CHECK(nfa_count_oracle(amb, 0, {0, 1}) == ExtNat(2));
  CHECK(nfa_enumerate_runs(amb, 0, {0, 1}).size() == 2);
  CHECK(nfa_count_oracle(amb, 0, {1}) == ExtNat(0));
  const auto un = corpus::load_as<Nfa>("nfa_unambiguous.json");
  CHECK(nfa_count_oracle(un, 0, {0, 1, 0}) == ExtNat(1));
  CHECK(nfa_count_oracle(un, 0, {1, 1}) == ExtNat(0));
  CHECK_THROWS_AS(nfa_enumerate_runs(un, 0, std::vector<int>(9, 0)), std::invalid_argument);
  CHECK(nfa_max_run_count(amb, 2) == 2);
  CHECK(nfa_max_run_count(un, 6) == 1);
  CHECK(nfa_max_run_count(corpus::load_as<Nfa>("nfa_empty.json"), 4) == 0);
}

TEST_CASE("counting by dynamic programming equals enumeration") {
  for (const auto& n : corpus::nfas(40, 307)) {
    const WordDomain dom(2, 8);
    for (std::size_t id = 0; id < dom.size(); id += 3) {
      const auto w = dom.word(id);
      for (std::size_t s = 0; s < n.size(); ++s) {
        CHECK(nfa_count_oracle(n, static_cast<int>(s), w) ==
              ExtNat(nfa_enumerate_runs(n, static_cast<int>(s), w).size()));
      }
    }
  }
}

TEST_CASE("counting oracle matches the counting chain") {
  for (const auto& n : corpus::nfas(30, 308)) {
    const WordDomain dom(2, 4);
    const auto op = make_ufa_count(n, dom);
    const auto lfp = iterate(op, dom.max_length() + 1);
    for (std::size_t s = 0; s < n.size(); ++s) {
      for (std::size_t id = 0; id < dom.size(); ++id) {
        CHECK(lfp[s * dom.size() + id] == nfa_count_oracle(n, static_cast<int>(s), dom.word(id)));
      }
    }
  }
}

TEST_CASE("weighted counting oracle") {
  const auto labels = corpus::load_as<MarkovChain>("labels_ab.json");
  const auto amb = corpus::load_as<Nfa>("nfa_ambiguous.json");
  const auto [count, prob] = nfa_prob_oracle(amb, labels, 0, {0, 1});
  CHECK(count == ExtNat(2));
  CHECK(prob == doctest::Approx(2 * 0.25 * 0.5));
  CHECK(nfa_prob_oracle(amb, labels, 0, {}).first == ExtNat(0));
  for (const auto& n : corpus::nfas(20, 309)) {
    const WordDomain dom(2, 3);
    const auto op = make_ufa_prob_count(n, labels, dom);
    const auto lfp = iterate(op, dom.max_length() + 1);
    for (std::size_t s = 0; s < n.size(); ++s) {
      for (std::size_t id = 0; id < dom.size(); ++id) {
        const auto [c, p] = nfa_prob_oracle(n, labels, static_cast<int>(s), dom.word(id));
        CHECK(lfp[s * dom.size() + id].first == c);
        CHECK(lfp[s * dom.size() + id].second.value() == doctest::Approx(p).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("lasso simulation") {
  const auto term = corpus::load_as<Dlts>("dlts_terminating.json");
  const auto ok = dlts_run_oracle(term, 0, LassoWord{{}, {0, 1}});
  CHECK(ok.terminates);
  CHECK(ok.steps == 2);
  CHECK(ok.safe);
  CHECK(ok.partial() == Lex2{true, true});
  const auto unsafe = dlts_run_oracle(term, 0, LassoWord{{1}, {0}});
  CHECK(unsafe.terminates);
  CHECK(unsafe.steps == 1);
  CHECK_FALSE(unsafe.safe);
  CHECK_FALSE(unsafe.total());
  const auto loop = dlts_run_oracle(corpus::load_as<Dlts>("dlts_looping.json"), 0, LassoWord{{}, {0}});
  CHECK_FALSE(loop.terminates);
  CHECK(loop.partial() == Lex2{false, true});
  CHECK_FALSE(loop.total());
}

TEST_CASE("lasso simulation matches the dlts fixed points") {
  for (const auto& c : corpus::dlts_cases(60, 310)) {
    const LassoDomain dom(c.words);
    const auto partial = kleene_lfp(make_dlts_partial(c.dlts, dom), ConvergencePolicy::exact(c.dlts.size() * dom.size() * 4 + 2));
    const auto total = kleene_lfp(make_dlts_total(c.dlts, dom), ConvergencePolicy::exact(c.dlts.size() * dom.size() * 2 + 2));
    for (std::size_t s = 0; s < c.dlts.size(); ++s) {
      for (std::size_t p = 0; p < dom.size(); ++p) {
        const auto r = dlts_run_oracle(c.dlts, static_cast<int>(s), dom.words()[dom.lasso_of(p)], dom.offset_of(p));
        CHECK(partial.last()[s * dom.size() + p] == r.partial());
        CHECK(total.last()[s * dom.size() + p] == r.total());
      }
    }
  }
}

TEST_CASE("capped path search") {
  const auto g = corpus::load_as<ResourceGraph>("resource_chain.json");
  CHECK(resource_path_oracle(g, 0) == BoundedNat::of(3));
  CHECK(resource_path_oracle(g, 1) == BoundedNat::of(2));
  CHECK(resource_path_oracle(g, 2) == BoundedNat::of(0));
  CHECK(resource_path_oracle(corpus::load_as<ResourceGraph>("resource_unreachable.json"), 0).is_bottom());
  ResourceGraph direct;
  direct.states = {"a", "b"};
  direct.bound = 4;
  direct.nodes = {ResourceNode{false, {1}, 0}, ResourceNode{true, {}, 0}};
  CHECK(resource_path_oracle(direct, 0) == BoundedNat::of(0));
}

TEST_CASE("capped path search matches the resource fixed point") {
  for (const auto& g : corpus::resource_graphs(200, 311)) {
    const auto t = kleene_lfp(make_resource(g), ConvergencePolicy::exact(g.size() * (g.bound + 2)));
    for (std::size_t s = 0; s < g.size(); ++s) CHECK(t.last()[s] == resource_path_oracle(g, static_cast<int>(s)));
  }
}
