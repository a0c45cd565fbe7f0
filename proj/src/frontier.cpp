#include "reachcorr/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace reachcorr {

ParetoFrontier::ParetoFrontier(std::vector<FrontierPoint> points) {
  for (const auto& p : points) {
    if (!(p.prob >= 0.0 && p.prob <= 1.0)) {
      throw std::domain_error("frontier probability outside [0,1]: " + std::to_string(p.prob));
    }
  }
  // Highest probability first; among equal probabilities, highest reward first.
  std::sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.reward > b.reward;
  });
  points_.reserve(points.size());
  for (const auto& p : points) {
    if (points_.empty() || p.reward > points_.back().reward) points_.push_back(p);
  }
  std::reverse(points_.begin(), points_.end());
}

bool ParetoFrontier::covers(const FrontierPoint& p) const {
  return std::any_of(points_.begin(), points_.end(),
                     [&](const FrontierPoint& g) { return dominated_by(p, g); });
}

ParetoFrontier frontier_union(const ParetoFrontier& a, const ParetoFrontier& b) {
  std::vector<FrontierPoint> merged(a.points());
  merged.insert(merged.end(), b.points().begin(), b.points().end());
  return ParetoFrontier(std::move(merged));
}

FrontierPoint frontier_sup(const ParetoFrontier& f) {
  if (f.empty()) throw std::invalid_argument("frontier_sup of an empty frontier");
  // Canonical order: the last point has the largest probability, the first the largest reward.
  return {f.points().back().prob, f.points().front().reward};
}

bool frontier_leq(const ParetoFrontier& a, const ParetoFrontier& b) {
  return std::all_of(a.points().begin(), a.points().end(),
                     [&](const FrontierPoint& p) { return b.covers(p); });
}

namespace {

bool close(ExtReal a, ExtReal b, double tol) { return abs_diff(a, b) <= ExtReal(tol); }

ExtReal point_distance(const FrontierPoint& a, const FrontierPoint& b) {
  return max(ExtReal(std::fabs(a.prob - b.prob)), abs_diff(a.reward, b.reward));
}

ExtReal directed_distance(const ParetoFrontier& from, const ParetoFrontier& to) {
  ExtReal worst;
  for (const auto& p : from.points()) {
    ExtReal best = ExtReal::infinity();
    for (const auto& q : to.points()) best = min(best, point_distance(p, q));
    worst = max(worst, best);
  }
  return worst;
}

}  // namespace

bool frontier_equal(const ParetoFrontier& a, const ParetoFrontier& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = a.points()[i];
    const auto& q = b.points()[i];
    if (std::fabs(p.prob - q.prob) > tol || !close(p.reward, q.reward, tol)) return false;
  }
  return true;
}

ExtReal frontier_distance(const ParetoFrontier& a, const ParetoFrontier& b) {
  if (a.empty() && b.empty()) return ExtReal();
  if (a.empty() || b.empty()) return ExtReal::infinity();
  return max(directed_distance(a, b), directed_distance(b, a));
}

}  // namespace reachcorr
