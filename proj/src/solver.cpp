#include "reachcorr/solver.hpp"

#include <Eigen/Dense>

#include <cstdio>
#include <limits>

#include "graph.hpp"

namespace reachcorr {

ConvergencePolicy ConvergencePolicy::exact(std::size_t max_iterations) {
  ConvergencePolicy p;
  p.mode = Mode::Exact;
  p.max_iterations = max_iterations;
  return p;
}

ConvergencePolicy ConvergencePolicy::tolerance(double epsilon, std::size_t max_iterations) {
  ConvergencePolicy p;
  p.mode = Mode::Tolerance;
  p.epsilon = epsilon;
  p.max_iterations = max_iterations;
  return p;
}

ConvergencePolicy ConvergencePolicy::bounded(std::size_t stages) {
  ConvergencePolicy p;
  p.mode = Mode::Bounded;
  p.bound = stages;
  return p;
}

void ConvergencePolicy::validate() const {
  if (mode == Mode::Tolerance && !(epsilon > 0.0)) {
    throw std::invalid_argument("tolerance policy needs epsilon > 0");
  }
  if (!(ExtReal() < divergence_cap)) throw std::invalid_argument("divergence cap must be positive");
}

std::string ConvergencePolicy::describe() const {
  switch (mode) {
    case Mode::Exact:
      return "exact";
    case Mode::Tolerance: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "tolerance(%g)", epsilon);
      return buf;
    }
    case Mode::Bounded:
      return "bounded(" + std::to_string(bound) + ")";
  }
  return "unknown";
}

Valuation<ExtReal> mc_total_exact(const MarkovChain& mc) {
  const std::size_t n = mc.size();
  graph::Adjacency adj(n);
  std::vector<bool> leaks(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& [t, q] : mc.transitions[s].entries) {
      if (q <= 0.0) continue;
      if (t == kTarget) {
        leaks[s] = true;
      } else {
        adj[s].push_back(t);
      }
    }
  }

  int ncomp = 0;
  const auto comp = graph::scc(adj, &ncomp);
  std::vector<bool> bottom(static_cast<std::size_t>(ncomp), true);
  std::vector<bool> rewarding(static_cast<std::size_t>(ncomp), false);
  for (std::size_t s = 0; s < n; ++s) {
    if (leaks[s]) bottom[comp[s]] = false;
    for (int t : adj[s]) {
      if (comp[t] != comp[s]) bottom[comp[s]] = false;
    }
    if (mc.rewards[s] > 0) rewarding[comp[s]] = true;
  }
  std::vector<bool> in_positive_bscc(n, false);
  std::vector<bool> positive(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    in_positive_bscc[s] = bottom[comp[s]] && rewarding[comp[s]];
    positive[s] = mc.rewards[s] > 0;
  }
  const auto infinite = graph::can_reach(adj, in_positive_bscc);
  const auto nonzero = graph::can_reach(adj, positive);

  std::vector<int> slot(n, -1);
  std::vector<std::size_t> free;
  for (std::size_t s = 0; s < n; ++s) {
    if (nonzero[s] && !infinite[s]) {
      slot[s] = static_cast<int>(free.size());
      free.push_back(s);
    }
  }

  std::vector<ExtReal> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (infinite[s]) out[s] = ExtReal::infinity();
  }
  if (free.empty()) return Valuation<ExtReal>(std::move(out));

  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t s = free[static_cast<std::size_t>(i)];
    b(i) = static_cast<double>(mc.rewards[s]);
    for (const auto& [t, q] : mc.transitions[s].entries) {
      if (t != kTarget && slot[t] >= 0) a(i, slot[t]) -= q;
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw std::logic_error("mc_total_exact: singular system after classification");
  const Eigen::VectorXd x = lu.solve(b);
  for (Eigen::Index i = 0; i < m; ++i) out[free[static_cast<std::size_t>(i)]] = ExtReal(std::max(0.0, x(i)));
  return Valuation<ExtReal>(std::move(out));
}

std::vector<bool> mdp_total_divergent(const Mdp& mdp) {
  const std::size_t n = mdp.size();
  std::vector<std::vector<bool>> allowed(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& c : mdp.choices[s]) {
      bool stays = true;
      for (const auto& [t, q] : c.dist.entries) {
        if (t == kTarget && q > 0.0) stays = false;
      }
      allowed[s].push_back(stays);
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    graph::Adjacency adj(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < allowed[s].size(); ++c) {
        if (!allowed[s][c]) continue;
        for (const auto& [t, q] : mdp.choices[s][c].dist.entries) {
          if (q > 0.0) adj[s].push_back(t);
        }
      }
    }
    const auto comp = graph::scc(adj);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < allowed[s].size(); ++c) {
        if (!allowed[s][c]) continue;
        for (const auto& [t, q] : mdp.choices[s][c].dist.entries) {
          if (q > 0.0 && comp[t] != comp[s]) {
            allowed[s][c] = false;
            changed = true;
            break;
          }
        }
      }
    }
  }

  graph::Adjacency adj(n);
  std::vector<bool> positive_ec(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t c = 0; c < mdp.choices[s].size(); ++c) {
      const auto& choice = mdp.choices[s][c];
      if (allowed[s][c] && choice.reward > 0) positive_ec[s] = true;
      for (const auto& [t, q] : choice.dist.entries) {
        if (q > 0.0 && t != kTarget) adj[s].push_back(t);
      }
    }
  }
  return graph::can_reach(adj, positive_ec);
}

ChainTrace<ExtReal> mdp_total_lfp(const Mdp& mdp, const ConvergencePolicy& policy) {
  Operator<ExtRealLattice> op = make_mdp_total(mdp);
  const auto divergent = mdp_total_divergent(mdp);
  op.step = [mdp, divergent](const Valuation<ExtReal>& k) {
    auto v = step_mdp_total(mdp, k);
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (divergent[s]) v[s] = ExtReal::infinity();
    }
    return v;
  };
  return kleene_lfp(op, policy);
}

namespace {

/// Upper bound on the candidate points one frontier step enumerates.
std::size_t frontier_step_cost(const Mdp& mdp, const Valuation<ParetoFrontier>& k) {
  constexpr std::size_t cap = std::numeric_limits<std::size_t>::max() / 2;
  std::size_t total = 0;
  for (const auto& choices : mdp.choices) {
    for (const auto& c : choices) {
      std::size_t acc = 1;
      for (const auto& [succ, q] : c.dist.entries) {
        if (succ == kTarget) continue;
        const std::size_t n = k[succ].size();
        acc = (n != 0 && acc > cap / n) ? cap : acc * n;
      }
      total = std::min(cap, total + acc);
    }
  }
  return total;
}

}  // namespace

FrontierChain mdp_frontier_chain(const Mdp& mdp, const ConvergencePolicy& policy, std::size_t explosion_limit) {
  policy.validate();
  const auto op = make_mdp_partial(mdp, explosion_limit);
  FrontierChain out;
  auto& trace = out.trace;
  trace.policy = policy;
  trace.iterates.push_back(op.bottom());
  trace.stages.push_back(0);
  const std::size_t limit =
      policy.mode == ConvergencePolicy::Mode::Bounded ? policy.bound : policy.max_iterations;
  const double tol = policy.mode == ConvergencePolicy::Mode::Tolerance ? policy.epsilon : 0.0;
  const std::size_t work_limit =
      explosion_limit > std::numeric_limits<std::size_t>::max() / kFrontierWorkFactor
          ? std::numeric_limits<std::size_t>::max()
          : explosion_limit * kFrontierWorkFactor;
  std::size_t work = 0;
  for (std::size_t i = 1; i <= limit; ++i) {
    const std::size_t cost = frontier_step_cost(mdp, trace.last());
    if (cost > work_limit - std::min(work, work_limit)) {
      out.exploded = true;
      out.explosion = "frontier chain needs more than " + std::to_string(work_limit) +
                      " candidate points over all steps";
      break;
    }
    work += cost;
    Valuation<ParetoFrontier> next;
    try {
      next = detail::promote(op.lattice, op(trace.last()), policy.divergence_cap);
    } catch (const ExplosionError& e) {
      out.exploded = true;
      out.explosion = e.what();
      break;
    }
    trace.steps = i;
    const bool same = equal(op.lattice, next, trace.last(), tol);
    if (trace.iterates.size() >= 3) {
      trace.iterates.erase(trace.iterates.begin() + 1);
      trace.stages.erase(trace.stages.begin() + 1);
    }
    trace.iterates.push_back(std::move(next));
    trace.stages.push_back(i);
    if (same) {
      trace.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace reachcorr
