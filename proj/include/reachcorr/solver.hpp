#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachcorr/galois.hpp"
#include "reachcorr/lattice.hpp"
#include "reachcorr/models.hpp"
#include "reachcorr/operators.hpp"

namespace reachcorr {

struct ConvergencePolicy {
  enum class Mode { Exact, Tolerance, Bounded };

  Mode mode = Mode::Tolerance;
  double epsilon = 1e-10;
  std::size_t bound = 0;  // stage count in Bounded mode
  std::size_t max_iterations = 100000;
  ExtReal divergence_cap = ExtReal(1e12);

  static ConvergencePolicy exact(std::size_t max_iterations = 100000);
  static ConvergencePolicy tolerance(double epsilon, std::size_t max_iterations = 100000);
  static ConvergencePolicy bounded(std::size_t stages);

  /// Throws std::invalid_argument unless epsilon > 0 (tolerance mode) and cap > 0.
  void validate() const;
  /// "exact", "tolerance(1e-06)" or "bounded(5)".
  std::string describe() const;
};

template <class T>
struct ChainTrace {
  std::vector<Valuation<T>> iterates;  // iterates[i] = Xi^i(bottom); may be thinned, see kleene_lfp
  std::vector<std::size_t> stages;     // stage number of each kept iterate
  bool converged = false;
  std::size_t steps = 0;
  ConvergencePolicy policy;

  const Valuation<T>& last() const { return iterates.back(); }
  /// "exact", "tolerance(...)", "bounded(n)", or "approximate" when not converged.
  std::string scope() const { return converged ? policy.describe() : "approximate"; }
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::size_t steps) : std::runtime_error(what), steps_(steps) {}
  std::size_t steps() const { return steps_; }

 private:
  std::size_t steps_;
};

/// Raised by kleene_lfp in exact mode; carries the last iterate.
template <class T>
class NonConvergence : public NonConvergenceError {
 public:
  NonConvergence(std::string tag, std::size_t steps, Valuation<T> last)
      : NonConvergenceError(tag + ": no exact fixed point after " + std::to_string(steps) + " iterations", steps),
        last_(std::move(last)) {}
  const Valuation<T>& last() const { return last_; }

 private:
  Valuation<T> last_;
};

namespace detail {

template <Lattice L>
Valuation<typename L::value_type> promote(const L& lat, Valuation<typename L::value_type> v, ExtReal cap) {
  if constexpr (PromotableLattice<L>) {
    if (cap.is_finite()) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = lat.promote(v[i], cap);
    }
  }
  return v;
}

}  // namespace detail

/// Iterates op from bottom. Coordinates above the divergence cap become inf
/// (promotable lattices only). With keep_all = false only the first and the
/// last two iterates are stored.
template <Lattice L>
ChainTrace<typename L::value_type> kleene_lfp(const Operator<L>& op, const ConvergencePolicy& policy,
                                              bool keep_all = true) {
  using T = typename L::value_type;
  policy.validate();
  ChainTrace<T> trace;
  trace.policy = policy;
  Valuation<T> cur = op.bottom();
  trace.iterates.push_back(cur);
  trace.stages.push_back(0);

  const std::size_t limit =
      policy.mode == ConvergencePolicy::Mode::Bounded ? policy.bound : policy.max_iterations;
  const double tol = policy.mode == ConvergencePolicy::Mode::Tolerance ? policy.epsilon : 0.0;
  for (std::size_t i = 1; i <= limit; ++i) {
    Valuation<T> next = detail::promote(op.lattice, op(cur), policy.divergence_cap);
    trace.steps = i;
    const bool same = equal(op.lattice, next, cur, tol);
    if (!keep_all && trace.iterates.size() >= 3) {
      trace.iterates.erase(trace.iterates.begin() + 1);
      trace.stages.erase(trace.stages.begin() + 1);
    }
    trace.iterates.push_back(next);
    trace.stages.push_back(i);
    cur = std::move(next);
    if (same) {
      trace.converged = true;
      return trace;
    }
  }
  if (policy.mode == ConvergencePolicy::Mode::Exact) {
    throw NonConvergence<T>(op.tag, trace.steps, cur);
  }
  return trace;
}

/// Fixed point within tol: op(v) = v.
template <Lattice L>
bool is_fixed_point(const Operator<L>& op, const Valuation<typename L::value_type>& v, double tol) {
  return equal(op.lattice, op(v), v, tol);
}

/// Total expected rewards of a finite Markov chain. Infinite exactly on the
/// states that can reach a bottom SCC containing a positive reward; zero on
/// states that cannot reach a positive reward; the rest by an LU solve of
/// (I - P) x = rew restricted to the remaining states.
Valuation<ExtReal> mc_total_exact(const MarkovChain& mc);

/// States of an MDP whose maximal total expected reward is infinite: those
/// that can reach an end component containing a choice with positive reward.
std::vector<bool> mdp_total_divergent(const Mdp& mdp);

/// Least fixed point of the MDP total operator with the divergent states
/// fixed at inf (same least fixed point), iterated under `policy`.
ChainTrace<ExtReal> mdp_total_lfp(const Mdp& mdp, const ConvergencePolicy& policy);

/// The frontier chain from {(0,0)}, iterated under `policy`. A step that
/// would exceed the explosion limit ends the chain unconverged at the last
/// computed iterate instead of throwing; exact mode does not throw either.
/// The chain also stops once the candidate points summed over all steps pass
/// kFrontierWorkFactor times the explosion limit.
struct FrontierChain {
  ChainTrace<ParetoFrontier> trace;
  bool exploded = false;
  std::string explosion;  // why the chain was cut short, when exploded
};
inline constexpr std::size_t kFrontierWorkFactor = 16;
FrontierChain mdp_frontier_chain(const Mdp& mdp, const ConvergencePolicy& policy,
                                 std::size_t explosion_limit = kDefaultExplosionLimit);

/// Both initial chains for n stages and their stagewise images.
template <class TC, class TA>
struct ChainPair {
  std::vector<Valuation<TC>> concrete;  // Phi^i(bottom), i = 0..n
  std::vector<Valuation<TA>> abstract;  // Psi^i(bottom)
  std::vector<Valuation<TA>> lowered;   // lower(Phi^i(bottom))
  std::vector<Valuation<TC>> raised;    // upper(Psi^i(bottom))
};

template <GaloisConnection G, Lattice LC, Lattice LA>
ChainPair<typename LC::value_type, typename LA::value_type> chain_pair(const Operator<LC>& concrete,
                                                                       const Operator<LA>& abstract,
                                                                       const G& transport, std::size_t n) {
  ChainPair<typename LC::value_type, typename LA::value_type> out;
  auto c = concrete.bottom();
  auto a = abstract.bottom();
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) {
      c = concrete(c);
      a = abstract(a);
    }
    out.concrete.push_back(c);
    out.abstract.push_back(a);
    out.lowered.push_back(apply_lower(transport, c));
    out.raised.push_back(apply_upper(transport, a));
  }
  return out;
}

}  // namespace reachcorr
