#include "reachcorr/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace reachcorr {

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

std::size_t saturating_add(std::size_t a, std::size_t b) { return a > kSaturated - b ? kSaturated : a + b; }

class Budget {
 public:
  Budget(std::string name, std::size_t limit) : name_(std::move(name)), limit_(limit) {}
  void tick() {
    if (++used_ > limit_) throw OracleBudgetError(name_, used_, limit_);
  }

 private:
  std::string name_;
  std::size_t limit_;
  std::size_t used_ = 0;
};

std::size_t lasso_length(const LassoWord& w) { return w.prefix.size() + w.loop.size(); }

int lasso_letter(const LassoWord& w, std::size_t p) {
  return p < w.prefix.size() ? w.prefix[p] : w.loop[p - w.prefix.size()];
}

std::size_t lasso_next(const LassoWord& w, std::size_t p) {
  return p + 1 == lasso_length(w) ? w.prefix.size() : p + 1;
}

}  // namespace

Valuation<ProbReward> mc_partial_oracle(const MarkovChain& mc, std::size_t n, std::size_t budget) {
  Budget guard("mc_partial_oracle", budget);
  std::vector<ProbReward> out(mc.size(), {0.0, ExtReal()});
  for (std::size_t s = 0; s < mc.size(); ++s) {
    double prob = 0.0;
    double reward = 0.0;
    // (state, path probability, reward collected before this state, transitions taken)
    std::function<void(int, double, double, std::size_t)> walk = [&](int v, double pr, double acc, std::size_t d) {
      guard.tick();
      const double here = acc + static_cast<double>(mc.rewards[v]);
      for (const auto& [t, q] : mc.transitions[v].entries) {
        if (q <= 0.0) continue;
        if (t == kTarget) {
          prob += pr * q;
          reward += pr * q * here;
        } else if (d + 1 < n) {
          walk(t, pr * q, here, d + 1);
        }
      }
    };
    if (n > 0) walk(static_cast<int>(s), 1.0, 0.0, 0);
    out[s] = {std::min(prob, 1.0), ExtReal(reward)};
  }
  return Valuation<ProbReward>(std::move(out));
}

Valuation<ExtReal> mc_total_oracle(const MarkovChain& mc, std::size_t n, std::size_t budget) {
  Budget guard("mc_total_oracle", budget);
  std::vector<ExtReal> out(mc.size());
  for (std::size_t s = 0; s < mc.size(); ++s) {
    double total = 0.0;
    std::function<void(int, double, double, std::size_t)> walk = [&](int v, double pr, double acc, std::size_t d) {
      guard.tick();
      if (d == n || v == kTarget) {
        total += pr * acc;
        return;
      }
      const double here = acc + static_cast<double>(mc.rewards[v]);
      for (const auto& [t, q] : mc.transitions[v].entries) {
        if (q > 0.0) walk(t, pr * q, here, d + 1);
      }
    };
    walk(static_cast<int>(s), 1.0, 0.0, 0);
    out[s] = ExtReal(total);
  }
  return Valuation<ExtReal>(std::move(out));
}

std::vector<std::size_t> count_scheduler_prefixes(const Mdp& mdp, std::size_t n) {
  std::vector<std::size_t> cur(mdp.size(), 1);
  for (std::size_t d = 1; d <= n; ++d) {
    std::vector<std::size_t> next(mdp.size(), 0);
    for (std::size_t s = 0; s < mdp.size(); ++s) {
      for (const auto& c : mdp.choices[s]) {
        std::size_t ways = 1;
        for (const auto& [t, q] : c.dist.entries) {
          if (t != kTarget && q > 0.0) ways = saturating_mul(ways, cur[t]);
        }
        next[s] = saturating_add(next[s], ways);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Valuation<ParetoFrontier> mdp_pareto_oracle(const Mdp& mdp, std::size_t n, std::size_t budget) {
  const auto counts = count_scheduler_prefixes(mdp, n);
  for (std::size_t c : counts) {
    if (c > budget) throw OracleBudgetError("mdp_pareto_oracle", c, budget);
  }

  using Outcome = std::pair<double, double>;  // (Pr^d, ERew^d) of one scheduler
  // outcomes[d][s]: one entry per scheduler on the histories below a history ending in s,
  // with d transitions left. Unpruned.
  std::vector<std::vector<std::vector<Outcome>>> outcomes(n + 1, std::vector<std::vector<Outcome>>(mdp.size()));
  for (std::size_t s = 0; s < mdp.size(); ++s) outcomes[0][s] = {{0.0, 0.0}};
  for (std::size_t d = 1; d <= n; ++d) {
    for (std::size_t s = 0; s < mdp.size(); ++s) {
      auto& here = outcomes[d][s];
      for (const auto& c : mdp.choices[s]) {
        double hit = 0.0;
        std::vector<std::pair<int, double>> inner;
        for (const auto& [t, q] : c.dist.entries) {
          if (q <= 0.0) continue;
          if (t == kTarget) {
            hit += q;
          } else {
            inner.emplace_back(t, q);
          }
        }
        std::vector<std::size_t> pick(inner.size(), 0);
        while (true) {
          double p = hit;
          double r = 0.0;
          for (std::size_t j = 0; j < inner.size(); ++j) {
            const auto& [pt, rt] = outcomes[d - 1][inner[j].first][pick[j]];
            p += inner[j].second * pt;
            r += inner[j].second * rt;
          }
          r += static_cast<double>(c.reward) * p;
          here.emplace_back(p, r);
          std::size_t j = 0;
          for (; j < inner.size(); ++j) {
            if (++pick[j] < outcomes[d - 1][inner[j].first].size()) break;
            pick[j] = 0;
          }
          if (j == inner.size()) break;
        }
      }
    }
  }

  std::vector<ParetoFrontier> out;
  out.reserve(mdp.size());
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    auto pts = outcomes[n][s];
    std::sort(pts.begin(), pts.end(), [](const Outcome& a, const Outcome& b) {
      return a.first != b.first ? a.first > b.first : a.second > b.second;
    });
    std::vector<FrontierPoint> maximal;
    double best = -1.0;
    for (const auto& [p, r] : pts) {
      if (r > best) {
        maximal.push_back({std::min(p, 1.0), ExtReal(r)});
        best = r;
      }
    }
    out.emplace_back(std::move(maximal));
  }
  return Valuation<ParetoFrontier>(std::move(out));
}

ExtNat nfa_count_oracle(const Nfa& nfa, int state, const std::vector<int>& word) {
  std::vector<ExtNat> runs(nfa.size());
  for (std::size_t q = 0; q < nfa.size(); ++q) runs[q] = nfa.accepting[q] ? ExtNat(1) : ExtNat(0);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    std::vector<ExtNat> prev(nfa.size());
    for (std::size_t q = 0; q < nfa.size(); ++q) {
      for (int t : nfa.delta[q][*it]) prev[q] = prev[q] + runs[t];
    }
    runs = std::move(prev);
  }
  return runs[state];
}

std::vector<std::vector<int>> nfa_enumerate_runs(const Nfa& nfa, int state, const std::vector<int>& word) {
  if (word.size() > 8) throw std::invalid_argument("nfa_enumerate_runs: words up to length 8 only");
  std::vector<std::vector<int>> runs;
  std::vector<int> run{state};
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == word.size()) {
      if (nfa.accepting[run.back()]) runs.push_back(run);
      return;
    }
    for (int t : nfa.delta[run.back()][word[i]]) {
      run.push_back(t);
      extend(i + 1);
      run.pop_back();
    }
  };
  extend(0);
  return runs;
}

std::pair<ExtNat, double> nfa_prob_oracle(const Nfa& nfa, const MarkovChain& labels, int state,
                                          const std::vector<int>& word) {
  const ExtNat count = nfa_count_oracle(nfa, state, word);
  double weight = 1.0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const int next = i + 1 < word.size() ? word[i + 1] : kTarget;
    double c = 0.0;
    for (const auto& [t, q] : labels.transitions[word[i]].entries) {
      if (t == next) c += q;
    }
    weight *= c;
  }
  if (count.is_infinite()) return {count, weight > 0.0 ? std::numeric_limits<double>::infinity() : 0.0};
  return {count, static_cast<double>(count.value()) * weight};
}

unsigned nfa_max_run_count(const Nfa& nfa, std::size_t max_length) {
  using Counts = std::vector<unsigned char>;
  Counts base(nfa.size());
  for (std::size_t q = 0; q < nfa.size(); ++q) base[q] = nfa.accepting[q] ? 1 : 0;
  std::set<Counts> seen{base};
  std::vector<Counts> layer{base};
  unsigned best = 0;
  for (unsigned char x : base) best = std::max<unsigned>(best, x);
  for (std::size_t len = 1; len <= max_length && !layer.empty() && best < 2; ++len) {
    std::vector<Counts> next_layer;
    for (const auto& runs : layer) {
      for (std::size_t a = 0; a < nfa.alphabet.size(); ++a) {
        Counts prev(nfa.size(), 0);
        for (std::size_t q = 0; q < nfa.size(); ++q) {
          unsigned sum = 0;
          for (int t : nfa.delta[q][a]) sum += runs[t];
          prev[q] = static_cast<unsigned char>(std::min(sum, 2u));
          best = std::max<unsigned>(best, prev[q]);
        }
        if (seen.insert(prev).second) next_layer.push_back(std::move(prev));
      }
    }
    layer = std::move(next_layer);
  }
  return best;
}

DltsRun dlts_run_oracle(const Dlts& d, int state, const LassoWord& lasso, std::size_t offset) {
  if (lasso.loop.empty()) throw std::invalid_argument("dlts_run_oracle: empty loop");
  if (offset >= lasso_length(lasso)) throw std::out_of_range("dlts_run_oracle: offset outside the lasso");
  DltsRun run;
  std::set<std::pair<int, std::size_t>> visited;
  std::size_t p = offset;
  while (visited.emplace(state, p).second) {
    const int t = d.step[state][lasso_letter(lasso, p)];
    ++run.steps;
    if (t == kTarget) {
      run.terminates = true;
      run.final_state = state;
      run.safe = d.safe[state];
      return run;
    }
    state = t;
    p = lasso_next(lasso, p);
  }
  return run;
}

BoundedNat resource_path_oracle(const ResourceGraph& g, int state) {
  const int m = g.bound;
  std::vector<std::vector<bool>> seen(g.size(), std::vector<bool>(static_cast<std::size_t>(m) + 1, false));
  std::deque<std::pair<int, int>> queue{{state, 0}};
  seen[state][0] = true;
  BoundedNat best = BoundedNat::bottom();
  while (!queue.empty()) {
    const auto [v, acc] = queue.front();
    queue.pop_front();
    const ResourceNode& node = g.nodes[v];
    if (node.target) {
      if (best.is_bottom() || acc > best.level) best = BoundedNat::of(acc);
      continue;
    }
    const auto capped = std::min<std::uint64_t>(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(acc) + std::min<std::uint64_t>(node.resource, m));
    const int next = static_cast<int>(capped);
    for (int t : node.successors) {
      if (!seen[t][next]) {
        seen[t][next] = true;
        queue.emplace_back(t, next);
      }
    }
  }
  return best;
}

}  // namespace reachcorr
