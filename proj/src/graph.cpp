#include "graph.hpp"

#include <algorithm>
#include <deque>

namespace reachcorr::graph {

std::vector<int> scc(const Adjacency& adj, int* count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<int> comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  int next_comp = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.v].size()) {
        const int w = adj[f.v][f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  if (count != nullptr) *count = next_comp;
  return comp;
}

std::vector<bool> can_reach(const Adjacency& adj, const std::vector<bool>& goal) {
  const std::size_t n = adj.size();
  Adjacency rev(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int w : adj[v]) rev[w].push_back(static_cast<int>(v));
  }
  std::vector<bool> seen(goal);
  std::deque<int> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (seen[v]) queue.push_back(static_cast<int>(v));
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : rev[v]) {
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

std::vector<bool> reachable_from(const Adjacency& adj, int start) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<int> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace reachcorr::graph
