#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reachcorr/ext_numbers.hpp"
#include "reachcorr/frontier.hpp"

namespace reachcorr {

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Element types that are not plain scalars.
// ---------------------------------------------------------------------------

/// Element of {bot, 0, ..., M}; the bound M lives in the lattice object.
struct BoundedNat {
  static constexpr int kBottom = -1;
  int level = kBottom;

  static constexpr BoundedNat bottom() { return {}; }
  static constexpr BoundedNat of(int n) { return {n}; }
  constexpr bool is_bottom() const { return level == kBottom; }

  friend constexpr bool operator==(BoundedNat, BoundedNat) = default;
};

/// Element of (2 x 2) under the lexicographic order.
struct Lex2 {
  bool first = false;
  bool second = false;
  friend constexpr bool operator==(Lex2, Lex2) = default;
};

// ---------------------------------------------------------------------------
// Lattice kinds. Each exposes bottom / leq / join / equal(tol) / distance /
// contains. leq is exact; tolerance is only used by equal().
// ---------------------------------------------------------------------------

struct Bool2Lattice {
  using value_type = bool;
  static bool bottom() { return false; }
  static bool top() { return true; }
  static bool leq(bool a, bool b) { return !a || b; }
  static bool join(bool a, bool b) { return a || b; }
  static bool equal(bool a, bool b, double) { return a == b; }
  static ExtReal distance(bool a, bool b) { return a == b ? ExtReal() : ExtReal(1.0); }
  static bool contains(bool) { return true; }
  static std::string name() { return "2"; }
};

struct UnitIntervalLattice {
  using value_type = double;
  static double bottom() { return 0.0; }
  static double top() { return 1.0; }
  static bool leq(double a, double b) { return a <= b; }
  static double join(double a, double b) { return std::max(a, b); }
  static bool equal(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
  static ExtReal distance(double a, double b) { return ExtReal(std::fabs(a - b)); }
  static bool contains(double a) { return a >= 0.0 && a <= 1.0; }
  static std::string name() { return "I1"; }
};

struct ExtRealLattice {
  using value_type = ExtReal;
  static ExtReal bottom() { return {}; }
  static ExtReal top() { return ExtReal::infinity(); }
  static bool leq(ExtReal a, ExtReal b) { return a <= b; }
  static ExtReal join(ExtReal a, ExtReal b) { return max(a, b); }
  static bool equal(ExtReal a, ExtReal b, double tol) { return abs_diff(a, b) <= ExtReal(tol); }
  static ExtReal distance(ExtReal a, ExtReal b) { return abs_diff(a, b); }
  static bool contains(ExtReal) { return true; }
  static ExtReal promote(ExtReal a, ExtReal cap) { return a > cap ? ExtReal::infinity() : a; }
  static std::string name() { return "Iinf"; }
};

struct ExtNatLattice {
  using value_type = ExtNat;
  static ExtNat bottom() { return {}; }
  static ExtNat top() { return ExtNat::infinity(); }
  static bool leq(ExtNat a, ExtNat b) { return a <= b; }
  static ExtNat join(ExtNat a, ExtNat b) { return std::max(a, b); }
  static bool equal(ExtNat a, ExtNat b, double) { return a == b; }
  static ExtReal distance(ExtNat a, ExtNat b) { return abs_diff(a.to_ext_real(), b.to_ext_real()); }
  static bool contains(ExtNat) { return true; }
  static std::string name() { return "Ninf"; }
};

/// {bot, 0, ..., M} with bot strictly below 0.
class BoundedNatLattice {
 public:
  using value_type = BoundedNat;
  explicit BoundedNatLattice(int bound) : bound_(bound) {
    if (bound < 0) throw LatticeError("BoundedNat bound must be non-negative");
  }
  int bound() const { return bound_; }
  BoundedNat bottom() const { return BoundedNat::bottom(); }
  BoundedNat top() const { return BoundedNat::of(bound_); }
  bool leq(BoundedNat a, BoundedNat b) const {
    check(a);
    check(b);
    return a.level <= b.level;
  }
  BoundedNat join(BoundedNat a, BoundedNat b) const { return leq(a, b) ? b : a; }
  bool equal(BoundedNat a, BoundedNat b, double) const { return a == b; }
  ExtReal distance(BoundedNat a, BoundedNat b) const {
    return ExtReal(std::fabs(static_cast<double>(a.level - b.level)));
  }
  bool contains(BoundedNat a) const { return a.level >= BoundedNat::kBottom && a.level <= bound_; }
  std::string name() const { return "M_bot(" + std::to_string(bound_) + ")"; }

 private:
  void check(BoundedNat a) const {
    if (!contains(a)) {
      throw LatticeError("value " + std::to_string(a.level) + " outside " + name());
    }
  }
  int bound_;
};

/// (2 x 2)_l: (a,b) <= (c,d) iff a <= c and (a = c implies b <= d). A chain of four.
struct Lex2Lattice {
  using value_type = Lex2;
  static Lex2 bottom() { return {false, false}; }
  static Lex2 top() { return {true, true}; }
  static int rank(Lex2 a) { return (a.first ? 2 : 0) + (a.second ? 1 : 0); }
  static bool leq(Lex2 a, Lex2 b) {
    if (a.first != b.first) return !a.first;
    return !a.second || b.second;
  }
  static Lex2 join(Lex2 a, Lex2 b) { return leq(a, b) ? b : a; }
  static bool equal(Lex2 a, Lex2 b, double) { return a == b; }
  static ExtReal distance(Lex2 a, Lex2 b) { return a == b ? ExtReal() : ExtReal(1.0); }
  static bool contains(Lex2) { return true; }
  static std::string name() { return "(2x2)_l"; }
};

/// Product with the componentwise order.
template <class L1, class L2>
class ProductLattice {
 public:
  using value_type = std::pair<typename L1::value_type, typename L2::value_type>;

  ProductLattice() = default;
  ProductLattice(L1 first, L2 second) : first_(std::move(first)), second_(std::move(second)) {}

  const L1& first() const { return first_; }
  const L2& second() const { return second_; }

  value_type bottom() const { return {first_.bottom(), second_.bottom()}; }
  bool leq(const value_type& a, const value_type& b) const {
    return first_.leq(a.first, b.first) && second_.leq(a.second, b.second);
  }
  value_type join(const value_type& a, const value_type& b) const {
    return {first_.join(a.first, b.first), second_.join(a.second, b.second)};
  }
  bool equal(const value_type& a, const value_type& b, double tol) const {
    return first_.equal(a.first, b.first, tol) && second_.equal(a.second, b.second, tol);
  }
  ExtReal distance(const value_type& a, const value_type& b) const {
    return max(first_.distance(a.first, b.first), second_.distance(a.second, b.second));
  }
  bool contains(const value_type& a) const {
    return first_.contains(a.first) && second_.contains(a.second);
  }
  std::string name() const { return first_.name() + "x" + second_.name(); }

  value_type promote(const value_type& a, ExtReal cap) const
    requires requires(const L2& l, typename L2::value_type v) { l.promote(v, cap); }
  {
    return {a.first, second_.promote(a.second, cap)};
  }

 private:
  L1 first_{};
  L2 second_{};
};

/// Lowersets of I1 x Iinf as Pareto frontiers. Bottom is {(0,0)}: every
/// chain the engine builds is seeded there.
struct FrontierLattice {
  using value_type = ParetoFrontier;
  static ParetoFrontier bottom() { return ParetoFrontier::origin(); }
  static bool leq(const ParetoFrontier& a, const ParetoFrontier& b) { return frontier_leq(a, b); }
  static ParetoFrontier join(const ParetoFrontier& a, const ParetoFrontier& b) {
    return frontier_union(a, b);
  }
  static bool equal(const ParetoFrontier& a, const ParetoFrontier& b, double tol) {
    return frontier_equal(a, b, tol);
  }
  static ExtReal distance(const ParetoFrontier& a, const ParetoFrontier& b) {
    return frontier_distance(a, b);
  }
  static bool contains(const ParetoFrontier&) { return true; }
  static ParetoFrontier promote(const ParetoFrontier& a, ExtReal cap) {
    std::vector<FrontierPoint> pts(a.points());
    for (auto& p : pts) p.reward = ExtRealLattice::promote(p.reward, cap);
    return ParetoFrontier(std::move(pts));
  }
  static std::string name() { return "(I1xIinf)v"; }
};

using ProbRewardLattice = ProductLattice<UnitIntervalLattice, ExtRealLattice>;
using ProbReward = ProbRewardLattice::value_type;  // (probability, reward)
using BoolProbLattice = ProductLattice<Bool2Lattice, UnitIntervalLattice>;
using BoolProb = BoolProbLattice::value_type;
using CountRewardLattice = ProductLattice<ExtNatLattice, ExtRealLattice>;
using CountReward = CountRewardLattice::value_type;

template <class L>
concept Lattice = requires(const L& lat, const typename L::value_type& a, double tol) {
  { lat.bottom() } -> std::convertible_to<typename L::value_type>;
  { lat.leq(a, a) } -> std::same_as<bool>;
  { lat.join(a, a) } -> std::convertible_to<typename L::value_type>;
  { lat.equal(a, a, tol) } -> std::same_as<bool>;
  { lat.distance(a, a) } -> std::same_as<ExtReal>;
  { lat.contains(a) } -> std::same_as<bool>;
};

template <class L>
concept PromotableLattice =
    Lattice<L> && requires(const L& lat, const typename L::value_type& a, ExtReal cap) {
      { lat.promote(a, cap) } -> std::convertible_to<typename L::value_type>;
    };

// ---------------------------------------------------------------------------
// Valuations: total maps from a dense index set to lattice elements.
// ---------------------------------------------------------------------------

template <class T>
class Valuation {
 public:
  using value_type = T;

  Valuation() = default;
  Valuation(std::size_t n, const T& fill) : entries_(n, fill) {}
  explicit Valuation(std::vector<T> entries) : entries_(std::move(entries)) {}
  Valuation(std::initializer_list<T> entries) : entries_(entries) {}

  std::size_t size() const { return entries_.size(); }
  decltype(auto) operator[](std::size_t i) const { return entries_[i]; }
  decltype(auto) operator[](std::size_t i) { return entries_[i]; }
  decltype(auto) at(std::size_t i) const { return entries_.at(i); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const std::vector<T>& entries() const { return entries_; }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::vector<T> entries_;
};

namespace detail {
template <class A, class B>
void require_same_index(const Valuation<A>& a, const Valuation<B>& b) {
  if (a.size() != b.size()) {
    throw LatticeError("valuation index mismatch: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
}
}  // namespace detail

template <Lattice L>
Valuation<typename L::value_type> bottom_valuation(const L& lat, std::size_t n) {
  return Valuation<typename L::value_type>(n, lat.bottom());
}

template <Lattice L>
bool leq(const L& lat, const Valuation<typename L::value_type>& a,
         const Valuation<typename L::value_type>& b) {
  detail::require_same_index(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!lat.leq(a[i], b[i])) return false;
  }
  return true;
}

template <Lattice L>
bool equal(const L& lat, const Valuation<typename L::value_type>& a,
           const Valuation<typename L::value_type>& b, double tol) {
  detail::require_same_index(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!lat.equal(a[i], b[i], tol)) return false;
  }
  return true;
}

template <Lattice L>
Valuation<typename L::value_type> join(const L& lat, const Valuation<typename L::value_type>& a,
                                       const Valuation<typename L::value_type>& b) {
  detail::require_same_index(a, b);
  std::vector<typename L::value_type> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(lat.join(a[i], b[i]));
  return Valuation<typename L::value_type>(std::move(out));
}

/// Largest pointwise distance.
template <Lattice L>
ExtReal max_distance(const L& lat, const Valuation<typename L::value_type>& a,
                     const Valuation<typename L::value_type>& b) {
  detail::require_same_index(a, b);
  ExtReal worst;
  for (std::size_t i = 0; i < a.size(); ++i) worst = max(worst, lat.distance(a[i], b[i]));
  return worst;
}

template <Lattice L>
void require_contains(const L& lat, const Valuation<typename L::value_type>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!lat.contains(v[i])) {
      throw LatticeError("entry " + std::to_string(i) + " is not an element of " + lat.name());
    }
  }
}

// ---------------------------------------------------------------------------
// Runtime-described lattices, for callers that only know the kind at run
// time (file formats, the CLI). Delegates to the static kinds above.
// ---------------------------------------------------------------------------

enum class LatticeKind { Bool2, UnitInterval, ExtReal, ExtNat, BoundedNat, Lex2, Product, Frontier };

struct LatticeDescriptor {
  LatticeKind kind = LatticeKind::Bool2;
  int bound = 0;                              // BoundedNat only
  std::vector<LatticeDescriptor> factors;     // Product only, exactly two

  static LatticeDescriptor bounded_nat(int m) { return {LatticeKind::BoundedNat, m, {}}; }
  static LatticeDescriptor product(LatticeDescriptor a, LatticeDescriptor b) {
    return {LatticeKind::Product, 0, {std::move(a), std::move(b)}};
  }
};

/// Dynamically typed lattice element.
class Element {
 public:
  enum class Tag { Bool, Real, ExtReal, ExtNat, BoundedNat, Lex2, Pair, Frontier };

  static Element boolean(bool b);
  static Element real(double d);
  static Element ext_real(ExtReal r);
  static Element ext_nat(ExtNat n);
  static Element bounded_nat(BoundedNat n);
  static Element lex2(Lex2 v);
  static Element pair(Element a, Element b);
  static Element frontier(ParetoFrontier f);

  Tag tag() const { return tag_; }
  bool as_bool() const;
  double as_real() const;
  ExtReal as_ext_real() const;
  ExtNat as_ext_nat() const;
  BoundedNat as_bounded_nat() const;
  Lex2 as_lex2() const;
  const Element& first() const;
  const Element& second() const;
  const ParetoFrontier& as_frontier() const;

 private:
  Tag tag_ = Tag::Bool;
  bool b_ = false;
  double d_ = 0.0;
  ExtReal r_;
  ExtNat n_;
  BoundedNat bn_;
  Lex2 lex_;
  std::vector<Element> pair_;
  ParetoFrontier frontier_;
};

/// Order test on runtime-described elements. Throws LatticeError when an
/// element's kind does not match the descriptor.
bool leq(const Element& a, const Element& b, const LatticeDescriptor& lat);

}  // namespace reachcorr
