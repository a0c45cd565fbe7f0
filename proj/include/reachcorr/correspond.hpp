#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "reachcorr/galois.hpp"
#include "reachcorr/json_io.hpp"
#include "reachcorr/models.hpp"
#include "reachcorr/reachability.hpp"
#include "reachcorr/solver.hpp"
#include "reachcorr/words.hpp"

namespace reachcorr {

struct Condition {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CorrespondenceReport {
  std::string instance;
  Verdict grc;
  std::string checked_object;
  bool coincidence = false;
  ExtReal deviation;        // max of the two below
  ExtReal deviation_lower;  // lower(concrete) vs abstract
  ExtReal deviation_upper;  // upper(abstract) vs concrete
  std::string scope;        // "exact", "tolerance(..)" or "approximate"
  std::vector<std::string> flags;
  std::vector<Condition> conditions;
  std::vector<std::string> witnesses;
  Json values;  // {"concrete", "abstract", "lowered", "raised"}: label -> value

  bool approximate() const { return scope == "approximate"; }
  /// The correspondence claim broken: GRC holds but the fixed points differ.
  bool soundness_violation() const { return grc.holds() && !coincidence; }
};

Json report_to_json(const CorrespondenceReport& r);

struct VerifyOptions {
  ConvergencePolicy policy = ConvergencePolicy::tolerance(1e-10);
  double tol = 1e-6;
  std::size_t explosion_limit = kDefaultExplosionLimit;
};

/// Partial vs total expected reward; the total side by the exact linear solve.
CorrespondenceReport verify_mc(const MarkovChain& mc, const VerifyOptions& opt = {});
/// Resource-bounded vs plain reachability (exact lattices).
CorrespondenceReport verify_resource(const ResourceGraph& g, const VerifyOptions& opt = {});
/// Partial vs total correctness over the lasso domain (exact lattices).
CorrespondenceReport verify_dlts(const Dlts& d, const LassoDomain& dom, const VerifyOptions& opt = {});
/// The frontier approximant of f vs the maximal total expected reward.
CorrespondenceReport verify_mdp(const Mdp& mdp, const VerifyOptions& opt = {});

/// Dispatch on the model type (mc, mdp, resource, dlts). Throws
/// std::invalid_argument for an NFA.
CorrespondenceReport verify_equivalence(const Model& model, const VerifyOptions& opt = {},
                                        const std::vector<LassoWord>& words = {});

struct ChainOptions {
  std::size_t max_length = 4;
  double tol = 1e-6;
  std::size_t samples = 500;
  std::uint64_t seed = 0x5eed;
};

/// Language membership vs accepting-run counting on words up to max_length.
CorrespondenceReport verify_chain(const Nfa& n, const ChainOptions& opt = {});
/// The same pair weighted by a Markov chain over the letters.
CorrespondenceReport verify_chain_prob(const Nfa& n, const MarkovChain& labels, const ChainOptions& opt = {});

// ---------------------------------------------------------------------------
// Transport of prefixed points along a connection.
// ---------------------------------------------------------------------------

/// Pointwise a <= b, or join(a, b) equal to b within tol.
template <Lattice L>
bool leq_within(const L& lat, const Valuation<typename L::value_type>& a,
                const Valuation<typename L::value_type>& b, double tol) {
  if (a.size() != b.size()) throw LatticeError("valuation index mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!lat.leq(a[i], b[i]) && !lat.equal(lat.join(a[i], b[i]), b[i], tol)) return false;
  }
  return true;
}

template <class T>
struct TransportResult {
  Valuation<T> image;
  bool precondition_ok = false;
  bool valid = false;  // image is a prefixed point of the other operator
  std::string message;
};

template <class T>
using StepFn = std::function<Valuation<T>(const Valuation<T>&)>;

/// (k, Phi k <= k) with k in Fix(eta)  |->  (lower k, Psi lower k <= lower k).
template <GaloisConnection G>
TransportResult<AbstractValue<G>> transport_lower(const G& g, const Valuation<ConcreteValue<G>>& k,
                                                  const StepFn<ConcreteValue<G>>& step_concrete,
                                                  const StepFn<AbstractValue<G>>& step_abstract, double tol) {
  TransportResult<AbstractValue<G>> r;
  if (!in_fix_unit(g, k, tol)) {
    r.message = "not in Fix(eta): upper(lower(k)) differs from k";
    return r;
  }
  if (!leq_within(g.concrete(), step_concrete(k), k, tol)) {
    r.message = "not a prefixed point of the concrete operator";
    return r;
  }
  r.precondition_ok = true;
  r.image = apply_lower(g, k);
  r.valid = leq_within(g.abstract(), step_abstract(r.image), r.image, tol);
  if (!r.valid) r.message = "image is not a prefixed point of the abstract operator";
  return r;
}

/// (k, Psi k <= k) with k in Fix(epsilon)  |->  (upper k, Phi upper k <= upper k).
template <GaloisConnection G>
TransportResult<ConcreteValue<G>> transport_upper(const G& g, const Valuation<AbstractValue<G>>& k,
                                                  const StepFn<ConcreteValue<G>>& step_concrete,
                                                  const StepFn<AbstractValue<G>>& step_abstract, double tol) {
  TransportResult<ConcreteValue<G>> r;
  if (!leq_within(g.abstract(), step_abstract(k), k, tol)) {
    r.message = "not a prefixed point of the abstract operator";
    return r;
  }
  if (!in_fix_counit(g, k, tol)) {
    r.message = "not in Fix(epsilon): lower(upper(k)) differs from k";
    return r;
  }
  r.precondition_ok = true;
  r.image = apply_upper(g, k);
  r.valid = leq_within(g.concrete(), step_concrete(r.image), r.image, tol);
  if (!r.valid) r.message = "image is not a prefixed point of the concrete operator";
  return r;
}

}  // namespace reachcorr
