#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachcorr/galois.hpp"
#include "reachcorr/lattice.hpp"
#include "reachcorr/models.hpp"
#include "reachcorr/words.hpp"

namespace reachcorr {

enum class InstanceTag {
  McPartial,
  McTotal,
  MdpPartialFrontier,
  MdpTotal,
  ResourceBounded,
  ResourceReach,
  DltsPartial,
  DltsTotal,
  UfaLang,
  UfaCount,
  UfaProbPair,
  LiftPartial,
  LiftTotal,
};

std::string instance_name(InstanceTag tag);
std::optional<InstanceTag> parse_instance(const std::string& name);
std::vector<InstanceTag> all_instances();

/// Raised when a frontier step would enumerate more candidate points than allowed.
class ExplosionError : public std::runtime_error {
 public:
  ExplosionError(const std::string& state, std::size_t needed, std::size_t limit);
  const std::string& state() const { return state_; }

 private:
  std::string state_;
};

inline constexpr std::size_t kDefaultExplosionLimit = 1'000'000;

// ---------------------------------------------------------------------------
// One-step maps. Valuations over states use the model's state order; word
// and lasso indexed valuations use index state * domain.size() + position.
// ---------------------------------------------------------------------------

Valuation<ProbReward> step_mc_partial(const MarkovChain& mc, const Valuation<ProbReward>& k);
Valuation<ExtReal> step_mc_total(const MarkovChain& mc, const Valuation<ExtReal>& k);

Valuation<ParetoFrontier> step_mdp_partial(const Mdp& mdp, const Valuation<ParetoFrontier>& k,
                                           std::size_t explosion_limit = kDefaultExplosionLimit);
Valuation<ExtReal> step_mdp_total(const Mdp& mdp, const Valuation<ExtReal>& k);

/// Capped sum min(M, m + n); the printed max(M, m + n) would be constantly M.
Valuation<BoundedNat> step_resource(const ResourceGraph& g, const Valuation<BoundedNat>& k);
Valuation<bool> step_resource_reach(const ResourceGraph& g, const Valuation<bool>& k);

Valuation<Lex2> step_dlts_partial(const Dlts& d, const LassoDomain& dom, const Valuation<Lex2>& k);
Valuation<bool> step_dlts_total(const Dlts& d, const LassoDomain& dom, const Valuation<bool>& k);

Valuation<bool> step_ufa_lang(const Nfa& n, const WordDomain& dom, const Valuation<bool>& k);
Valuation<ExtNat> step_ufa_count(const Nfa& n, const WordDomain& dom, const Valuation<ExtNat>& k);

/// `labels` is a Markov chain whose states are the NFA letters (same names, same order).
/// Throws ModelError on an alphabet mismatch.
void check_label_chain(const Nfa& n, const MarkovChain& labels);
Valuation<BoolProb> step_ufa_prob_lang(const Nfa& n, const MarkovChain& labels, const WordDomain& dom,
                                       const Valuation<BoolProb>& k);
Valuation<CountReward> step_ufa_prob_count(const Nfa& n, const MarkovChain& labels,
                                           const WordDomain& dom, const Valuation<CountReward>& k);

// ---------------------------------------------------------------------------
// Lifts of the Markov chain operator to MDPs.
// ---------------------------------------------------------------------------

using McPartialStep = std::function<Valuation<ProbReward>(const MarkovChain&, const Valuation<ProbReward>&)>;
using MdpFrontierStep = std::function<Valuation<ParetoFrontier>(const Mdp&, const Valuation<ParetoFrontier>&)>;
using MdpTotalStep = std::function<Valuation<ExtReal>(const Mdp&, const Valuation<ExtReal>&)>;

/// Union, over every global choice function and every global selection of
/// frontier generators, of the principal lowersets of the Markov chain step.
MdpFrontierStep lift_partial(McPartialStep mc_step, std::size_t explosion_limit = kDefaultExplosionLimit);
/// Join, over every global choice function, of the second component of the
/// Markov chain step applied to <1, k>.
MdpTotalStep lift_total(McPartialStep mc_step);

/// The Markov chain obtained by fixing choice[s] at every state.
MarkovChain resolve_choices(const Mdp& mdp, const std::vector<std::size_t>& choice);

// ---------------------------------------------------------------------------
// Operators as values: a lattice, an index set and a step.
// ---------------------------------------------------------------------------

template <Lattice L>
struct Operator {
  using lattice_type = L;
  using value_type = typename L::value_type;

  std::string tag;
  L lattice;
  std::size_t size = 0;
  std::function<Valuation<value_type>(const Valuation<value_type>&)> step;
  std::function<std::string(std::size_t)> label;

  Valuation<value_type> operator()(const Valuation<value_type>& k) const {
    if (k.size() != size) {
      throw LatticeError("valuation index mismatch: " + std::to_string(k.size()) + " vs " +
                         std::to_string(size));
    }
    return step(k);
  }
  Valuation<value_type> bottom() const { return bottom_valuation(lattice, size); }
};

Operator<ProbRewardLattice> make_mc_partial(const MarkovChain& mc);
Operator<ExtRealLattice> make_mc_total(const MarkovChain& mc);
Operator<FrontierLattice> make_mdp_partial(const Mdp& mdp, std::size_t explosion_limit = kDefaultExplosionLimit);
Operator<ExtRealLattice> make_mdp_total(const Mdp& mdp);
Operator<BoundedNatLattice> make_resource(const ResourceGraph& g);
Operator<Bool2Lattice> make_resource_reach(const ResourceGraph& g);
Operator<Lex2Lattice> make_dlts_partial(const Dlts& d, const LassoDomain& dom);
Operator<Bool2Lattice> make_dlts_total(const Dlts& d, const LassoDomain& dom);
Operator<Bool2Lattice> make_ufa_lang(const Nfa& n, const WordDomain& dom);
Operator<ExtNatLattice> make_ufa_count(const Nfa& n, const WordDomain& dom);
Operator<BoolProbLattice> make_ufa_prob_lang(const Nfa& n, const MarkovChain& labels, const WordDomain& dom);
Operator<CountRewardLattice> make_ufa_prob_count(const Nfa& n, const MarkovChain& labels, const WordDomain& dom);
Operator<FrontierLattice> make_lift_partial(const Mdp& mdp, std::size_t explosion_limit = kDefaultExplosionLimit);
Operator<ExtRealLattice> make_lift_total(const Mdp& mdp);

/// "(state, word)" labels for word-indexed valuations.
std::string word_index_label(const std::vector<std::string>& states, const std::vector<std::string>& alphabet,
                             const WordDomain& dom, std::size_t index);
std::string lasso_index_label(const std::vector<std::string>& states, const std::vector<std::string>& labels,
                              const LassoDomain& dom, std::size_t index);

}  // namespace reachcorr
