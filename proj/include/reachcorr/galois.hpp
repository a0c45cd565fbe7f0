#pragma once

#include <algorithm>
#include <vector>

#include "reachcorr/lattice.hpp"

namespace reachcorr {

/// A monotone pair lower -| upper between a concrete lattice C and an
/// abstract lattice D: lower(x) <= y  iff  x <= upper(y).
template <class G>
concept GaloisConnection = requires(const G& g, const typename G::concrete_lattice::value_type& x,
                                    const typename G::abstract_lattice::value_type& y) {
  requires Lattice<typename G::concrete_lattice>;
  requires Lattice<typename G::abstract_lattice>;
  { g.concrete() } -> std::convertible_to<const typename G::concrete_lattice&>;
  { g.abstract() } -> std::convertible_to<const typename G::abstract_lattice&>;
  { g.lower(x) } -> std::convertible_to<typename G::abstract_lattice::value_type>;
  { g.upper(y) } -> std::convertible_to<typename G::concrete_lattice::value_type>;
};

template <GaloisConnection G>
using ConcreteValue = typename G::concrete_lattice::value_type;
template <GaloisConnection G>
using AbstractValue = typename G::abstract_lattice::value_type;

/// Partial vs total expected reward on Markov chains:
/// lower = second projection, upper = r |-> (1, r).
struct ProbRewardConnection {
  using concrete_lattice = ProbRewardLattice;
  using abstract_lattice = ExtRealLattice;
  const ProbRewardLattice& concrete() const { return c_; }
  const ExtRealLattice& abstract() const { return a_; }
  ExtReal lower(const ProbReward& x) const { return x.second; }
  ProbReward upper(ExtReal y) const { return {1.0, y}; }

 private:
  ProbRewardLattice c_;
  ExtRealLattice a_;
};

/// Frontier vs total reward on MDPs: lower = second projection of the join,
/// upper = principal lowerset of (1, r).
struct FrontierConnection {
  using concrete_lattice = FrontierLattice;
  using abstract_lattice = ExtRealLattice;
  const FrontierLattice& concrete() const { return c_; }
  const ExtRealLattice& abstract() const { return a_; }
  ExtReal lower(const ParetoFrontier& x) const { return frontier_sup(x).reward; }
  ParetoFrontier upper(ExtReal y) const { return ParetoFrontier::principal({1.0, y}); }

 private:
  FrontierLattice c_;
  ExtRealLattice a_;
};

/// Resource-bounded vs plain reachability: lower forgets the amount,
/// upper sends top to the bound M.
class ResourceConnection {
 public:
  using concrete_lattice = BoundedNatLattice;
  using abstract_lattice = Bool2Lattice;
  explicit ResourceConnection(int bound) : c_(bound) {}
  const BoundedNatLattice& concrete() const { return c_; }
  const Bool2Lattice& abstract() const { return a_; }
  bool lower(BoundedNat x) const { return !x.is_bottom(); }
  BoundedNat upper(bool y) const { return y ? BoundedNat::of(c_.bound()) : BoundedNat::bottom(); }

 private:
  BoundedNatLattice c_;
  Bool2Lattice a_;
};

/// Partial vs total correctness: lower (a,b) = a and b, upper t = (top, t).
struct Lex2Connection {
  using concrete_lattice = Lex2Lattice;
  using abstract_lattice = Bool2Lattice;
  const Lex2Lattice& concrete() const { return c_; }
  const Bool2Lattice& abstract() const { return a_; }
  bool lower(Lex2 x) const { return x.first && x.second; }
  Lex2 upper(bool y) const { return {true, y}; }

 private:
  Lex2Lattice c_;
  Bool2Lattice a_;
};

/// Language membership vs run counting: lower = indicator (top -> 1),
/// upper n = (n >= 1).
struct CountingConnection {
  using concrete_lattice = Bool2Lattice;
  using abstract_lattice = ExtNatLattice;
  const Bool2Lattice& concrete() const { return c_; }
  const ExtNatLattice& abstract() const { return a_; }
  ExtNat lower(bool x) const { return x ? ExtNat(1) : ExtNat(0); }
  bool upper(ExtNat y) const { return ExtNat(1) <= y; }

 private:
  Bool2Lattice c_;
  ExtNatLattice a_;
};

/// Counting connection paired with the inclusion [0,1] -> [0,inf] (whose
/// right adjoint is min(1, -)), for words weighted by a Markov chain.
struct WeightedCountingConnection {
  using concrete_lattice = BoolProbLattice;
  using abstract_lattice = CountRewardLattice;
  const BoolProbLattice& concrete() const { return c_; }
  const CountRewardLattice& abstract() const { return a_; }
  CountReward lower(const BoolProb& x) const {
    return {x.first ? ExtNat(1) : ExtNat(0), ExtReal(x.second)};
  }
  BoolProb upper(const CountReward& y) const {
    return {ExtNat(1) <= y.first, std::min(1.0, y.second.to_double())};
  }

 private:
  BoolProbLattice c_;
  CountRewardLattice a_;
};

template <GaloisConnection G>
Valuation<AbstractValue<G>> apply_lower(const G& g, const Valuation<ConcreteValue<G>>& v) {
  require_contains(g.concrete(), v);
  std::vector<AbstractValue<G>> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(g.lower(x));
  return Valuation<AbstractValue<G>>(std::move(out));
}

template <GaloisConnection G>
Valuation<ConcreteValue<G>> apply_upper(const G& g, const Valuation<AbstractValue<G>>& v) {
  require_contains(g.abstract(), v);
  std::vector<ConcreteValue<G>> out;
  out.reserve(v.size());
  for (const auto& y : v) out.push_back(g.upper(y));
  return Valuation<ConcreteValue<G>>(std::move(out));
}

/// v in Fix(unit): upper(lower(v)) = v pointwise within tol.
template <GaloisConnection G>
bool in_fix_unit(const G& g, const Valuation<ConcreteValue<G>>& v, double tol) {
  return equal(g.concrete(), apply_upper(g, apply_lower(g, v)), v, tol);
}

/// v in Fix(counit): lower(upper(v)) = v pointwise within tol.
template <GaloisConnection G>
bool in_fix_counit(const G& g, const Valuation<AbstractValue<G>>& v, double tol) {
  return equal(g.abstract(), apply_lower(g, apply_upper(g, v)), v, tol);
}

/// Indices where the unit is not an isomorphism.
template <GaloisConnection G>
std::vector<std::size_t> unit_defects(const G& g, const Valuation<ConcreteValue<G>>& v, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!g.concrete().equal(g.upper(g.lower(v[i])), v[i], tol)) out.push_back(i);
  }
  return out;
}

/// Indices where the counit is not an isomorphism.
template <GaloisConnection G>
std::vector<std::size_t> counit_defects(const G& g, const Valuation<AbstractValue<G>>& v,
                                        double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!g.abstract().equal(g.lower(g.upper(v[i])), v[i], tol)) out.push_back(i);
  }
  return out;
}

}  // namespace reachcorr
