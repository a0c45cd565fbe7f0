#include "reachcorr/lattice.hpp"

#include <cstdio>
#include <ostream>

namespace reachcorr {

std::string ExtReal::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value_);
  return buf;
}

std::ostream& operator<<(std::ostream& os, ExtReal x) { return os << x.to_string(); }
std::ostream& operator<<(std::ostream& os, ExtNat x) { return os << x.to_string(); }

Element Element::boolean(bool b) {
  Element e;
  e.tag_ = Tag::Bool;
  e.b_ = b;
  return e;
}
Element Element::real(double d) {
  Element e;
  e.tag_ = Tag::Real;
  e.d_ = d;
  return e;
}
Element Element::ext_real(ExtReal r) {
  Element e;
  e.tag_ = Tag::ExtReal;
  e.r_ = r;
  return e;
}
Element Element::ext_nat(ExtNat n) {
  Element e;
  e.tag_ = Tag::ExtNat;
  e.n_ = n;
  return e;
}
Element Element::bounded_nat(BoundedNat n) {
  Element e;
  e.tag_ = Tag::BoundedNat;
  e.bn_ = n;
  return e;
}
Element Element::lex2(Lex2 v) {
  Element e;
  e.tag_ = Tag::Lex2;
  e.lex_ = v;
  return e;
}
Element Element::pair(Element a, Element b) {
  Element e;
  e.tag_ = Tag::Pair;
  e.pair_ = {std::move(a), std::move(b)};
  return e;
}
Element Element::frontier(ParetoFrontier f) {
  Element e;
  e.tag_ = Tag::Frontier;
  e.frontier_ = std::move(f);
  return e;
}

namespace {
[[noreturn]] void mismatch(const char* wanted) {
  throw LatticeError(std::string("lattice kind mismatch: element is not ") + wanted);
}
}  // namespace

bool Element::as_bool() const {
  if (tag_ != Tag::Bool) mismatch("a Boolean");
  return b_;
}
double Element::as_real() const {
  if (tag_ != Tag::Real) mismatch("a real in [0,1]");
  return d_;
}
ExtReal Element::as_ext_real() const {
  if (tag_ != Tag::ExtReal) mismatch("an extended real");
  return r_;
}
ExtNat Element::as_ext_nat() const {
  if (tag_ != Tag::ExtNat) mismatch("an extended natural");
  return n_;
}
BoundedNat Element::as_bounded_nat() const {
  if (tag_ != Tag::BoundedNat) mismatch("a bounded natural");
  return bn_;
}
Lex2 Element::as_lex2() const {
  if (tag_ != Tag::Lex2) mismatch("a lexicographic pair");
  return lex_;
}
const Element& Element::first() const {
  if (tag_ != Tag::Pair) mismatch("a pair");
  return pair_[0];
}
const Element& Element::second() const {
  if (tag_ != Tag::Pair) mismatch("a pair");
  return pair_[1];
}
const ParetoFrontier& Element::as_frontier() const {
  if (tag_ != Tag::Frontier) mismatch("a frontier");
  return frontier_;
}

bool leq(const Element& a, const Element& b, const LatticeDescriptor& lat) {
  switch (lat.kind) {
    case LatticeKind::Bool2:
      return Bool2Lattice::leq(a.as_bool(), b.as_bool());
    case LatticeKind::UnitInterval: {
      const double x = a.as_real();
      const double y = b.as_real();
      if (!UnitIntervalLattice::contains(x) || !UnitIntervalLattice::contains(y)) {
        throw LatticeError("value outside [0,1]");
      }
      return x <= y;
    }
    case LatticeKind::ExtReal:
      return a.as_ext_real() <= b.as_ext_real();
    case LatticeKind::ExtNat:
      return a.as_ext_nat() <= b.as_ext_nat();
    case LatticeKind::BoundedNat:
      return BoundedNatLattice(lat.bound).leq(a.as_bounded_nat(), b.as_bounded_nat());
    case LatticeKind::Lex2:
      return Lex2Lattice::leq(a.as_lex2(), b.as_lex2());
    case LatticeKind::Product:
      if (lat.factors.size() != 2) throw LatticeError("product descriptor needs two factors");
      return leq(a.first(), b.first(), lat.factors[0]) && leq(a.second(), b.second(), lat.factors[1]);
    case LatticeKind::Frontier:
      return frontier_leq(a.as_frontier(), b.as_frontier());
  }
  throw LatticeError("unknown lattice kind");
}

}  // namespace reachcorr
