#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reachcorr/models.hpp"
#include "reachcorr/solver.hpp"
#include "reachcorr/words.hpp"

namespace reachcorr {

/// Outcome of a global reachability condition check.
struct Verdict {
  enum class Outcome { Holds, Fails, Inconclusive };
  enum class Scope { Exact, Approximate, Vacuous };

  Outcome outcome = Outcome::Inconclusive;
  Scope scope = Scope::Exact;
  std::vector<std::string> witnesses;
  std::string note;

  bool holds() const { return outcome == Outcome::Holds; }
  bool fails() const { return outcome == Outcome::Fails; }
};

std::string outcome_name(Verdict::Outcome o);
std::string scope_name(Verdict::Scope s);
/// {"holds": bool, "outcome": ..., "scope": ..., "witnesses": [...], "note": ...}
std::string verdict_json(const Verdict& v);

/// Almost-sure reachability of the target, decided on the graph: a state
/// fails iff it can reach a state from which the target is unreachable.
Verdict grc_mc(const MarkovChain& mc);

/// mu Phi of the capped-sum operator lies in Fix(eta): every state is
/// bottom or M. Witnesses are "state=value".
Verdict grc_resource(const ResourceGraph& g);

/// Every (state, lasso suffix) run terminates. A looping run is a genuine
/// counterexample (exact); success only covers the supplied lassos
/// (approximate), or nothing at all (vacuous).
Verdict grc_dlts(const Dlts& d, const LassoDomain& dom);

/// Two distinct accepting runs on one word from one state.
struct AmbiguityWitness {
  int state = 0;
  std::vector<int> word;
  std::vector<int> run1;  // states visited, run1[0] = state
  std::vector<int> run2;
};

/// Squaring construction; the shortest witness, or nullopt when unambiguous.
std::optional<AmbiguityWitness> find_ambiguity(const Nfa& n);

/// Unambiguity. Witnesses are [state, word].
Verdict grc_ufa(const Nfa& n);

/// Every state's frontier approximant collapses to one point with
/// probability within tol of 1. Inconclusive when the chain did not converge;
/// the witnesses then list the states not yet collapsed.
Verdict grc_mdp(const Mdp& mdp, const ConvergencePolicy& policy, double tol,
                std::size_t explosion_limit = kDefaultExplosionLimit);
/// The same check on an already computed frontier chain.
Verdict grc_mdp(const Mdp& mdp, const FrontierChain& chain, double tol);

/// Exact iff the chain converged with its last two iterates identical.
template <class T, Lattice L>
Verdict::Scope chain_scope(const L& lat, const ChainTrace<T>& trace) {
  if (!trace.converged || trace.iterates.size() < 2) return Verdict::Scope::Approximate;
  const auto& a = trace.iterates[trace.iterates.size() - 2];
  return equal(lat, a, trace.last(), 0.0) ? Verdict::Scope::Exact : Verdict::Scope::Approximate;
}

}  // namespace reachcorr
