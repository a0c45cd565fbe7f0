#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reachcorr/ext_numbers.hpp"
#include "reachcorr/frontier.hpp"
#include "reachcorr/lattice.hpp"
#include "reachcorr/models.hpp"

// Brute-force ground truth. Nothing here calls the operators or the solver.

namespace reachcorr {

class OracleBudgetError : public std::runtime_error {
 public:
  OracleBudgetError(const std::string& oracle, std::size_t needed, std::size_t budget)
      : std::runtime_error(oracle + ": oracle out of budget (needs " + std::to_string(needed) + ", budget " +
                           std::to_string(budget) + ")"),
        needed_(needed),
        budget_(budget) {}
  std::size_t needed() const { return needed_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t needed_;
  std::size_t budget_;
};

inline constexpr std::size_t kDefaultPathBudget = 2'000'000;
inline constexpr std::size_t kDefaultSchedulerBudget = 200'000;

/// Per state: probability and partial expected reward of the paths that hit
/// the target within n transitions.
Valuation<ProbReward> mc_partial_oracle(const MarkovChain& mc, std::size_t n,
                                        std::size_t budget = kDefaultPathBudget);

/// Per state: expected reward collected over the first n transitions, the
/// target being an absorbing state without reward.
Valuation<ExtReal> mc_total_oracle(const MarkovChain& mc, std::size_t n, std::size_t budget = kDefaultPathBudget);

/// Number of deterministic history-dependent schedulers that differ on the
/// histories of length < n reachable from each state.
std::vector<std::size_t> count_scheduler_prefixes(const Mdp& mdp, std::size_t n);

/// Per state: the maximal points of { (Pr^n, ERew^n) of sigma } over all
/// schedulers sigma, as a frontier.
Valuation<ParetoFrontier> mdp_pareto_oracle(const Mdp& mdp, std::size_t n,
                                            std::size_t budget = kDefaultSchedulerBudget);

/// Accepting runs of `word` from `state`, by dynamic programming.
ExtNat nfa_count_oracle(const Nfa& nfa, int state, const std::vector<int>& word);
/// The accepting runs themselves (state sequences), by explicit search.
/// Words up to length 8 only; throws std::invalid_argument otherwise.
std::vector<std::vector<int>> nfa_enumerate_runs(const Nfa& nfa, int state, const std::vector<int>& word);

/// (run count, count * P(word)) where P(word) multiplies the label chain's
/// probabilities along the word and into the target. P(empty) = 1.
std::pair<ExtNat, double> nfa_prob_oracle(const Nfa& nfa, const MarkovChain& labels, int state,
                                          const std::vector<int>& word);

/// Largest run count, capped at 2, over all words of length <= max_length
/// from any state. Computed on sets of capped count vectors.
unsigned nfa_max_run_count(const Nfa& nfa, std::size_t max_length);

struct DltsRun {
  bool terminates = false;
  std::size_t steps = 0;  // transitions taken, the last one into the target
  int final_state = -1;   // source of the transition into the target
  bool safe = false;      // safety of final_state

  /// (terminates, safe), or (false, true) for a run that loops.
  Lex2 partial() const { return terminates ? Lex2{true, safe} : Lex2{false, true}; }
  bool total() const { return terminates && safe; }
};

/// Simulates the run from `state` on the suffix of `lasso` starting at `offset`.
DltsRun dlts_run_oracle(const Dlts& d, int state, const LassoWord& lasso, std::size_t offset = 0);

/// Largest capped resource sum over paths from `state` to a target node;
/// bottom when no target is reachable.
BoundedNat resource_path_oracle(const ResourceGraph& g, int state);

}  // namespace reachcorr
