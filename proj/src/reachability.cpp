#include "reachcorr/reachability.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <set>

#include "graph.hpp"
#include "json.hpp"
#include "reachcorr/json_io.hpp"

namespace reachcorr {

std::string outcome_name(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Holds:
      return "holds";
    case Verdict::Outcome::Fails:
      return "fails";
    case Verdict::Outcome::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string scope_name(Verdict::Scope s) {
  switch (s) {
    case Verdict::Scope::Exact:
      return "exact";
    case Verdict::Scope::Approximate:
      return "approximate";
    case Verdict::Scope::Vacuous:
      return "vacuous";
  }
  return "unknown";
}

std::string verdict_json(const Verdict& v) { return verdict_to_json(v).dump(); }

Verdict grc_mc(const MarkovChain& mc) {
  const std::size_t n = mc.size();
  graph::Adjacency adj(n);
  std::vector<bool> leaks(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& [t, q] : mc.transitions[s].entries) {
      if (q <= 0.0) continue;
      if (t == kTarget) {
        leaks[s] = true;
      } else {
        adj[s].push_back(t);
      }
    }
  }
  const auto reaches_target = graph::can_reach(adj, leaks);
  std::vector<bool> stuck(n);
  for (std::size_t s = 0; s < n; ++s) stuck[s] = !reaches_target[s];
  const auto failing = graph::can_reach(adj, stuck);

  Verdict v;
  v.scope = Verdict::Scope::Exact;
  for (std::size_t s = 0; s < n; ++s) {
    if (failing[s]) v.witnesses.push_back(mc.states[s]);
  }
  v.outcome = v.witnesses.empty() ? Verdict::Outcome::Holds : Verdict::Outcome::Fails;
  if (!v.witnesses.empty()) v.note = "target reached with probability < 1 from the witness states";
  return v;
}

Verdict grc_resource(const ResourceGraph& g) {
  const auto op = make_resource(g);
  const auto trace = kleene_lfp(op, ConvergencePolicy::exact(g.size() * (static_cast<std::size_t>(g.bound) + 2) + 2));
  const auto& mu = trace.last();
  const ResourceConnection conn(g.bound);
  Verdict v;
  v.scope = Verdict::Scope::Exact;
  for (std::size_t i : unit_defects(conn, mu, 0.0)) {
    v.witnesses.push_back(g.states[i] + "=" + std::to_string(mu[i].level));
  }
  v.outcome = in_fix_unit(conn, mu, 0.0) ? Verdict::Outcome::Holds : Verdict::Outcome::Fails;
  if (v.fails()) v.note = "states with a least fixed point value strictly between bottom and M";
  return v;
}

Verdict grc_dlts(const Dlts& d, const LassoDomain& dom) {
  Verdict v;
  const std::size_t w = dom.size();
  for (std::size_t s = 0; s < d.size(); ++s) {
    for (std::size_t pos = 0; pos < w; ++pos) {
      std::set<std::pair<int, std::size_t>> seen;
      int state = static_cast<int>(s);
      std::size_t p = pos;
      bool loops = false;
      while (true) {
        if (!seen.emplace(state, p).second) {
          loops = true;
          break;
        }
        const int t = d.step[state][dom.letter(p)];
        if (t == kTarget) break;
        state = t;
        p = dom.next(p);
      }
      if (loops) v.witnesses.push_back(lasso_index_label(d.states, d.labels, dom, s * w + pos));
    }
  }
  if (!v.witnesses.empty()) {
    v.outcome = Verdict::Outcome::Fails;
    v.scope = Verdict::Scope::Exact;
    v.note = "runs that never terminate";
  } else {
    v.outcome = Verdict::Outcome::Holds;
    v.scope = w == 0 || d.size() == 0 ? Verdict::Scope::Vacuous : Verdict::Scope::Approximate;
    v.note = w == 0 ? "no lasso words supplied" : "checked on the supplied lasso words only";
  }
  return v;
}

std::optional<AmbiguityWitness> find_ambiguity(const Nfa& nfa) {
  const std::size_t n = nfa.size();
  const std::size_t letters = nfa.alphabet.size();
  auto pair_id = [n](int t, int u) { return static_cast<std::size_t>(t) * n + static_cast<std::size_t>(u); };

  // Backward BFS on the self-product from the doubly accepting pairs.
  std::vector<std::vector<std::size_t>> rev(n * n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t a = 0; a < letters; ++a) {
        for (int t2 : nfa.delta[t][a]) {
          for (int u2 : nfa.delta[u][a]) rev[pair_id(t2, u2)].push_back(t * n + u);
        }
      }
    }
  }
  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n * n, kUnreached);
  std::deque<std::size_t> queue;
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t u = 0; u < n; ++u) {
      if (nfa.accepting[t] && nfa.accepting[u]) {
        dist[t * n + u] = 0;
        queue.push_back(t * n + u);
      }
    }
  }
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : rev[x]) {
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }

  std::optional<AmbiguityWitness> best;
  std::size_t best_len = kUnreached;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t a = 0; a < letters; ++a) {
      const auto& succ = nfa.delta[q][a];
      for (std::size_t i = 0; i < succ.size(); ++i) {
        for (std::size_t j = i + 1; j < succ.size(); ++j) {
          const std::size_t dd = dist[pair_id(succ[i], succ[j])];
          if (dd == kUnreached || (best && dd + 1 >= best_len)) continue;
          AmbiguityWitness w;
          w.state = static_cast<int>(q);
          w.word = {static_cast<int>(a)};
          w.run1 = {static_cast<int>(q), succ[i]};
          w.run2 = {static_cast<int>(q), succ[j]};
          best = std::move(w);
          best_len = dd + 1;
        }
      }
    }
  }
  if (!best) return std::nullopt;

  int t = best->run1.back();
  int u = best->run2.back();
  while (dist[pair_id(t, u)] > 0) {
    const std::size_t want = dist[pair_id(t, u)] - 1;
    bool moved = false;
    for (std::size_t a = 0; a < letters && !moved; ++a) {
      for (int t2 : nfa.delta[t][a]) {
        for (int u2 : nfa.delta[u][a]) {
          if (!moved && dist[pair_id(t2, u2)] == want) {
            best->word.push_back(static_cast<int>(a));
            best->run1.push_back(t2);
            best->run2.push_back(u2);
            t = t2;
            u = u2;
            moved = true;
          }
        }
      }
    }
    if (!moved) throw std::logic_error("find_ambiguity: broken distance labelling");
  }
  return best;
}

Verdict grc_ufa(const Nfa& nfa) {
  Verdict v;
  v.scope = Verdict::Scope::Exact;
  const auto w = find_ambiguity(nfa);
  if (!w) {
    v.outcome = Verdict::Outcome::Holds;
    return v;
  }
  v.outcome = Verdict::Outcome::Fails;
  v.witnesses = {nfa.states[w->state], word_to_string(w->word, nfa.alphabet)};
  auto run = [&](const std::vector<int>& r) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? " " : "") + nfa.states[r[i]];
    return out;
  };
  v.note = "two accepting runs: [" + run(w->run1) + "] and [" + run(w->run2) + "]";
  return v;
}

Verdict grc_mdp(const Mdp& mdp, const ConvergencePolicy& policy, double tol, std::size_t explosion_limit) {
  return grc_mdp(mdp, mdp_frontier_chain(mdp, policy, explosion_limit), tol);
}

Verdict grc_mdp(const Mdp& mdp, const FrontierChain& chain, double tol) {
  const auto& trace = chain.trace;
  const auto& f = trace.last();
  Verdict v;
  v.scope = chain_scope(FrontierLattice{}, trace);
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    const auto& pts = f[s].points();
    const bool collapsed = pts.size() == 1 && std::fabs(pts.front().prob - 1.0) <= tol;
    if (!collapsed) v.witnesses.push_back(mdp.states[s] + ": " + frontier_to_string(f[s]));
  }
  v.outcome = v.witnesses.empty() ? Verdict::Outcome::Holds : Verdict::Outcome::Fails;
  // An unconverged approximant can still collapse later or spread out again.
  if (!trace.converged) v.outcome = Verdict::Outcome::Inconclusive;
  v.note = "frontier approximant after " + std::to_string(trace.steps) + " steps, " + trace.scope();
  if (chain.exploded) v.note += "; stopped by the explosion limit: " + chain.explosion;
  return v;
}

}  // namespace reachcorr
