#pragma once

#include <cstddef>
#include <vector>

#include "reachcorr/ext_numbers.hpp"

namespace reachcorr {

/// A generator of a lowerset in [0,1] x [0,inf]: (reachability probability, partial reward).
struct FrontierPoint {
  double prob = 0.0;
  ExtReal reward;

  friend bool operator==(const FrontierPoint&, const FrontierPoint&) = default;
};

/// True iff `a` is componentwise below `b`.
inline bool dominated_by(const FrontierPoint& a, const FrontierPoint& b) {
  return a.prob <= b.prob && a.reward <= b.reward;
}

/// Finitely generated lowerset of [0,1] x [0,inf], stored as its antichain
/// of maximal generators.
///
/// Canonical form: points sorted by strictly increasing probability and
/// strictly decreasing reward. Every constructor canonicalizes, so two
/// frontiers denote the same lowerset iff their point lists are identical.
class ParetoFrontier {
 public:
  ParetoFrontier() = default;
  explicit ParetoFrontier(std::vector<FrontierPoint> points);

  static ParetoFrontier principal(FrontierPoint p) { return ParetoFrontier({p}); }
  /// {(0,0)} -- the seed of every frontier chain.
  static ParetoFrontier origin() { return principal({0.0, ExtReal()}); }

  const std::vector<FrontierPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Membership of `p` in the represented lowerset.
  bool covers(const FrontierPoint& p) const;

  friend bool operator==(const ParetoFrontier&, const ParetoFrontier&) = default;

 private:
  std::vector<FrontierPoint> points_;
};

/// Canonical frontier of the union of the two lowersets.
ParetoFrontier frontier_union(const ParetoFrontier& a, const ParetoFrontier& b);

/// Join of the lowerset in the product lattice (componentwise maximum).
/// Throws std::invalid_argument on an empty frontier.
FrontierPoint frontier_sup(const ParetoFrontier& f);

/// Lowerset inclusion.
bool frontier_leq(const ParetoFrontier& a, const ParetoFrontier& b);

/// Equal cardinality and index-wise matched points within `tol` per coordinate.
bool frontier_equal(const ParetoFrontier& a, const ParetoFrontier& b, double tol);

/// Symmetric Hausdorff distance under the sup-norm on generators.
ExtReal frontier_distance(const ParetoFrontier& a, const ParetoFrontier& b);

}  // namespace reachcorr
