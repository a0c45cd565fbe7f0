#pragma once

#include <cstddef>
#include <vector>

namespace reachcorr::graph {

using Adjacency = std::vector<std::vector<int>>;

/// Strongly connected components (Tarjan, iterative). comp[v] is the
/// component id; ids are in reverse topological order.
std::vector<int> scc(const Adjacency& adj, int* count = nullptr);

/// Nodes from which some node in `goal` is reachable (goal included).
std::vector<bool> can_reach(const Adjacency& adj, const std::vector<bool>& goal);

/// Nodes reachable from `start` (start included).
std::vector<bool> reachable_from(const Adjacency& adj, int start);

}  // namespace reachcorr::graph
