#include "reachcorr/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace reachcorr {

namespace {

constexpr std::array<std::pair<InstanceTag, const char*>, 13> kInstanceNames{{
    {InstanceTag::McPartial, "mc_partial"},
    {InstanceTag::McTotal, "mc_total"},
    {InstanceTag::MdpPartialFrontier, "mdp_partial_frontier"},
    {InstanceTag::MdpTotal, "mdp_total"},
    {InstanceTag::ResourceBounded, "resource_bounded"},
    {InstanceTag::ResourceReach, "resource_reach"},
    {InstanceTag::DltsPartial, "dlts_partial"},
    {InstanceTag::DltsTotal, "dlts_total"},
    {InstanceTag::UfaLang, "ufa_lang"},
    {InstanceTag::UfaCount, "ufa_count"},
    {InstanceTag::UfaProbPair, "ufa_prob_pair"},
    {InstanceTag::LiftPartial, "lift_partial"},
    {InstanceTag::LiftTotal, "lift_total"},
}};

void require_size(std::size_t got, std::size_t want) {
  if (got != want) {
    throw LatticeError("valuation index mismatch: " + std::to_string(got) + " vs " + std::to_string(want));
  }
}

double probability_of(const Distribution& d, int succ) {
  for (const auto& [t, p] : d.entries) {
    if (t == succ) return p;
  }
  return 0.0;
}

ExtReal widen(std::uint64_t n) { return ExtReal(static_cast<double>(n)); }

/// Maximal points in canonical order.
std::vector<FrontierPoint> maximal_points(std::vector<FrontierPoint> pts) {
  return ParetoFrontier(std::move(pts)).points();
}

FrontierPoint clamp_point(double p, ExtReal r) { return {std::min(p, 1.0), r}; }

template <class L>
Operator<L> state_operator(std::string tag, L lattice, const std::vector<std::string>& states,
                           std::function<Valuation<typename L::value_type>(const Valuation<typename L::value_type>&)> f) {
  Operator<L> op{std::move(tag), std::move(lattice), states.size(), std::move(f), {}};
  auto names = states;
  op.label = [names](std::size_t i) { return names.at(i); };
  return op;
}

}  // namespace

std::string instance_name(InstanceTag tag) {
  for (const auto& [t, name] : kInstanceNames) {
    if (t == tag) return name;
  }
  throw std::logic_error("unknown instance tag");
}

std::optional<InstanceTag> parse_instance(const std::string& name) {
  for (const auto& [t, n] : kInstanceNames) {
    if (name == n) return t;
  }
  return std::nullopt;
}

std::vector<InstanceTag> all_instances() {
  std::vector<InstanceTag> out;
  for (const auto& entry : kInstanceNames) out.push_back(entry.first);
  return out;
}

ExplosionError::ExplosionError(const std::string& state, std::size_t needed, std::size_t limit)
    : std::runtime_error("frontier step at state " + state + " needs " + std::to_string(needed) +
                         " candidate points, above the explosion limit " + std::to_string(limit)),
      state_(state) {}

// --- Markov chains -------------------------------------------------------------

Valuation<ProbReward> step_mc_partial(const MarkovChain& mc, const Valuation<ProbReward>& k) {
  require_size(k.size(), mc.size());
  std::vector<ProbReward> out;
  out.reserve(mc.size());
  for (std::size_t s = 0; s < mc.size(); ++s) {
    const Distribution& d = mc.transitions[s];
    const double rew = static_cast<double>(mc.rewards[s]);
    const double pt = d.target_probability();
    double p = pt;
    ExtReal r(rew * pt);
    for (const auto& [succ, q] : d.entries) {
      if (succ == kTarget) continue;
      const auto& [p1, r1] = k[succ];
      p += q * p1;
      r += ExtReal(q) * (r1 + ExtReal(rew * p1));
    }
    out.emplace_back(std::min(p, 1.0), r);
  }
  return Valuation<ProbReward>(std::move(out));
}

Valuation<ExtReal> step_mc_total(const MarkovChain& mc, const Valuation<ExtReal>& k) {
  require_size(k.size(), mc.size());
  std::vector<ExtReal> out;
  out.reserve(mc.size());
  for (std::size_t s = 0; s < mc.size(); ++s) {
    ExtReal r = widen(mc.rewards[s]);
    for (const auto& [succ, q] : mc.transitions[s].entries) {
      if (succ != kTarget) r += ExtReal(q) * k[succ];
    }
    out.push_back(r);
  }
  return Valuation<ExtReal>(std::move(out));
}

// --- MDPs -------------------------------------------------------------------------

Valuation<ParetoFrontier> step_mdp_partial(const Mdp& mdp, const Valuation<ParetoFrontier>& k,
                                           std::size_t explosion_limit) {
  require_size(k.size(), mdp.size());
  std::vector<ParetoFrontier> out;
  out.reserve(mdp.size());
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    std::vector<FrontierPoint> all;
    for (const auto& [d, n] : mdp.choices[s]) {
      const double nd = static_cast<double>(n);
      const double pt = d.target_probability();
      // Partial sums over a prefix of the support, pruned to maximal points after each successor.
      std::vector<FrontierPoint> acc{clamp_point(pt, ExtReal(nd * pt))};
      for (const auto& [succ, q] : d.entries) {
        if (succ == kTarget) continue;
        const auto& gens = k[succ].points();
        const std::size_t needed = acc.size() * gens.size();
        if (needed > explosion_limit) throw ExplosionError(mdp.states[s], needed, explosion_limit);
        std::vector<FrontierPoint> next;
        next.reserve(needed);
        for (const auto& a : acc) {
          for (const auto& g : gens) {
            next.push_back(clamp_point(a.prob + q * g.prob, a.reward + ExtReal(q) * (g.reward + ExtReal(nd * g.prob))));
          }
        }
        acc = maximal_points(std::move(next));
      }
      all.insert(all.end(), acc.begin(), acc.end());
    }
    out.emplace_back(std::move(all));
  }
  return Valuation<ParetoFrontier>(std::move(out));
}

Valuation<ExtReal> step_mdp_total(const Mdp& mdp, const Valuation<ExtReal>& k) {
  require_size(k.size(), mdp.size());
  std::vector<ExtReal> out;
  out.reserve(mdp.size());
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    ExtReal best;
    for (const auto& [d, n] : mdp.choices[s]) {
      ExtReal v = widen(n);
      for (const auto& [succ, q] : d.entries) {
        if (succ != kTarget) v += ExtReal(q) * k[succ];
      }
      best = max(best, v);
    }
    out.push_back(best);
  }
  return Valuation<ExtReal>(std::move(out));
}

MarkovChain resolve_choices(const Mdp& mdp, const std::vector<std::size_t>& choice) {
  require_size(choice.size(), mdp.size());
  MarkovChain mc;
  mc.states = mdp.states;
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    const auto& c = mdp.choices[s].at(choice[s]);
    mc.transitions.push_back(c.dist);
    mc.rewards.push_back(c.reward);
  }
  return mc;
}

// --- resource-bounded reachability ---------------------------------------------------

Valuation<BoundedNat> step_resource(const ResourceGraph& g, const Valuation<BoundedNat>& k) {
  require_size(k.size(), g.size());
  const BoundedNatLattice lat(g.bound);
  require_contains(lat, k);
  const auto m = static_cast<std::uint64_t>(g.bound);
  std::vector<BoundedNat> out;
  out.reserve(g.size());
  for (std::size_t s = 0; s < g.size(); ++s) {
    const ResourceNode& node = g.nodes[s];
    if (node.target) {
      out.push_back(BoundedNat::of(0));
      continue;
    }
    BoundedNat v = BoundedNat::bottom();
    for (int x : node.successors) {
      if (k[x].is_bottom()) continue;
      const std::uint64_t sum = std::min<std::uint64_t>(m, static_cast<std::uint64_t>(k[x].level) + std::min(node.resource, m));
      v = lat.join(v, BoundedNat::of(static_cast<int>(sum)));
    }
    out.push_back(v);
  }
  return Valuation<BoundedNat>(std::move(out));
}

Valuation<bool> step_resource_reach(const ResourceGraph& g, const Valuation<bool>& k) {
  require_size(k.size(), g.size());
  std::vector<bool> out(g.size(), false);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const ResourceNode& node = g.nodes[s];
    if (node.target) {
      out[s] = true;
      continue;
    }
    for (int x : node.successors) {
      if (k[x]) out[s] = true;
    }
  }
  return Valuation<bool>(std::move(out));
}

// --- deterministic LTS over lasso words --------------------------------------------

Valuation<Lex2> step_dlts_partial(const Dlts& d, const LassoDomain& dom, const Valuation<Lex2>& k) {
  const std::size_t w = dom.size();
  require_size(k.size(), d.size() * w);
  std::vector<Lex2> out(k.size());
  for (std::size_t s = 0; s < d.size(); ++s) {
    for (std::size_t pos = 0; pos < w; ++pos) {
      const int t = d.step[s][dom.letter(pos)];
      if (t == kTarget) {
        out[s * w + pos] = {true, static_cast<bool>(d.safe[s])};
      } else {
        const Lex2 succ = k[static_cast<std::size_t>(t) * w + dom.next(pos)];
        out[s * w + pos] = {succ.first, !succ.first || succ.second};
      }
    }
  }
  return Valuation<Lex2>(std::move(out));
}

Valuation<bool> step_dlts_total(const Dlts& d, const LassoDomain& dom, const Valuation<bool>& k) {
  const std::size_t w = dom.size();
  require_size(k.size(), d.size() * w);
  std::vector<bool> out(k.size(), false);
  for (std::size_t s = 0; s < d.size(); ++s) {
    for (std::size_t pos = 0; pos < w; ++pos) {
      const int t = d.step[s][dom.letter(pos)];
      out[s * w + pos] = t == kTarget ? static_cast<bool>(d.safe[s]) : static_cast<bool>(k[static_cast<std::size_t>(t) * w + dom.next(pos)]);
    }
  }
  return Valuation<bool>(std::move(out));
}

// --- NFAs over bounded words -----------------------------------------------------------

Valuation<bool> step_ufa_lang(const Nfa& n, const WordDomain& dom, const Valuation<bool>& k) {
  const std::size_t w = dom.size();
  require_size(k.size(), n.size() * w);
  std::vector<bool> out(k.size(), false);
  for (std::size_t s = 0; s < n.size(); ++s) {
    for (std::size_t id = 0; id < w; ++id) {
      if (dom.length(id) == 0) {
        out[s * w + id] = n.accepting[s];
        continue;
      }
      const std::size_t rest = dom.tail(id);
      for (int t : n.successors(static_cast<int>(s), dom.head(id))) {
        if (k[static_cast<std::size_t>(t) * w + rest]) out[s * w + id] = true;
      }
    }
  }
  return Valuation<bool>(std::move(out));
}

Valuation<ExtNat> step_ufa_count(const Nfa& n, const WordDomain& dom, const Valuation<ExtNat>& k) {
  const std::size_t w = dom.size();
  require_size(k.size(), n.size() * w);
  std::vector<ExtNat> out(k.size());
  for (std::size_t s = 0; s < n.size(); ++s) {
    for (std::size_t id = 0; id < w; ++id) {
      if (dom.length(id) == 0) {
        out[s * w + id] = n.accepting[s] ? ExtNat(1) : ExtNat(0);
        continue;
      }
      const std::size_t rest = dom.tail(id);
      ExtNat sum;
      for (int t : n.successors(static_cast<int>(s), dom.head(id))) sum += k[static_cast<std::size_t>(t) * w + rest];
      out[s * w + id] = sum;
    }
  }
  return Valuation<ExtNat>(std::move(out));
}

void check_label_chain(const Nfa& n, const MarkovChain& labels) {
  if (labels.states != n.alphabet) {
    throw ModelError(ModelError::Kind::Validation,
                     "alphabet mismatch: the label chain's states must be the NFA alphabet in the same order");
  }
}

namespace {

/// c(a, b) where b is the letter after `id`'s head, or the target when `id` has length one.
double letter_probability(const MarkovChain& labels, const WordDomain& dom, std::size_t id) {
  const int a = dom.head(id);
  const std::size_t rest = dom.tail(id);
  const int b = dom.length(rest) == 0 ? kTarget : dom.head(rest);
  return probability_of(labels.transitions[a], b);
}

}  // namespace

Valuation<BoolProb> step_ufa_prob_lang(const Nfa& n, const MarkovChain& labels, const WordDomain& dom,
                                       const Valuation<BoolProb>& k) {
  check_label_chain(n, labels);
  const std::size_t w = dom.size();
  require_size(k.size(), n.size() * w);
  std::vector<BoolProb> out(k.size());
  for (std::size_t s = 0; s < n.size(); ++s) {
    for (std::size_t id = 0; id < w; ++id) {
      const std::size_t i = s * w + id;
      if (dom.length(id) == 0) {
        out[i] = {static_cast<bool>(n.accepting[s]), n.accepting[s] ? 1.0 : 0.0};
        continue;
      }
      const std::size_t rest = dom.tail(id);
      const double c = letter_probability(labels, dom, id);
      bool any = false;
      double best = 0.0;
      for (int t : n.successors(static_cast<int>(s), dom.head(id))) {
        const BoolProb& kt = k[static_cast<std::size_t>(t) * w + rest];
        any = any || kt.first;
        best = std::max(best, c * kt.second);
      }
      out[i] = {any, std::min(k[i].first ? 1.0 : 0.0, best)};
    }
  }
  return Valuation<BoolProb>(std::move(out));
}

Valuation<CountReward> step_ufa_prob_count(const Nfa& n, const MarkovChain& labels,
                                           const WordDomain& dom, const Valuation<CountReward>& k) {
  check_label_chain(n, labels);
  const std::size_t w = dom.size();
  require_size(k.size(), n.size() * w);
  std::vector<CountReward> out(k.size());
  for (std::size_t s = 0; s < n.size(); ++s) {
    for (std::size_t id = 0; id < w; ++id) {
      const std::size_t i = s * w + id;
      if (dom.length(id) == 0) {
        out[i] = {n.accepting[s] ? ExtNat(1) : ExtNat(0), ExtReal(n.accepting[s] ? 1.0 : 0.0)};
        continue;
      }
      const std::size_t rest = dom.tail(id);
      const ExtReal c(letter_probability(labels, dom, id));
      ExtNat count;
      ExtReal prob;
      for (int t : n.successors(static_cast<int>(s), dom.head(id))) {
        const CountReward& kt = k[static_cast<std::size_t>(t) * w + rest];
        count += kt.first;
        prob += c * kt.second;
      }
      out[i] = {count, prob};
    }
  }
  return Valuation<CountReward>(std::move(out));
}

// --- lifts ----------------------------------------------------------------------------

namespace {

/// Advances a mixed-radix counter; false once it wraps around.
bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

std::size_t saturating_product(const std::vector<std::size_t>& xs, std::size_t cap) {
  std::size_t p = 1;
  for (std::size_t x : xs) {
    if (x != 0 && p > cap / x) return cap + 1;
    p *= x;
  }
  return p;
}

}  // namespace

MdpFrontierStep lift_partial(McPartialStep mc_step, std::size_t explosion_limit) {
  return [mc_step = std::move(mc_step), explosion_limit](const Mdp& mdp, const Valuation<ParetoFrontier>& k) {
    require_size(k.size(), mdp.size());
    const std::size_t n = mdp.size();
    std::vector<std::size_t> choice_radix(n);
    std::vector<std::size_t> gen_radix(n);
    for (std::size_t s = 0; s < n; ++s) {
      choice_radix[s] = mdp.choices[s].size();
      gen_radix[s] = k[s].size();
      if (gen_radix[s] == 0) throw LatticeError("lift_partial needs non-empty frontiers");
    }
    std::vector<std::size_t> all_radix = choice_radix;
    all_radix.insert(all_radix.end(), gen_radix.begin(), gen_radix.end());
    const std::size_t needed = saturating_product(all_radix, explosion_limit);
    if (needed > explosion_limit) {
      const auto worst = std::max_element(gen_radix.begin(), gen_radix.end()) - gen_radix.begin();
      throw ExplosionError(mdp.states[static_cast<std::size_t>(worst)], needed, explosion_limit);
    }

    std::vector<std::vector<FrontierPoint>> pts(n);
    std::vector<std::size_t> choice(n, 0);
    do {
      const MarkovChain mc = resolve_choices(mdp, choice);
      std::vector<std::size_t> sel(n, 0);
      do {
        std::vector<ProbReward> kv;
        kv.reserve(n);
        for (std::size_t s = 0; s < n; ++s) {
          const auto& g = k[s].points()[sel[s]];
          kv.emplace_back(g.prob, g.reward);
        }
        const auto image = mc_step(mc, Valuation<ProbReward>(std::move(kv)));
        for (std::size_t s = 0; s < n; ++s) {
          pts[s].push_back({image[s].first, image[s].second});
          if (pts[s].size() > 4096) pts[s] = maximal_points(std::move(pts[s]));
        }
      } while (advance(sel, gen_radix));
    } while (advance(choice, choice_radix));

    std::vector<ParetoFrontier> out;
    out.reserve(n);
    for (auto& p : pts) out.emplace_back(std::move(p));
    return Valuation<ParetoFrontier>(std::move(out));
  };
}

MdpTotalStep lift_total(McPartialStep mc_step) {
  return [mc_step = std::move(mc_step)](const Mdp& mdp, const Valuation<ExtReal>& k) {
    require_size(k.size(), mdp.size());
    const std::size_t n = mdp.size();
    std::vector<std::size_t> radix(n);
    for (std::size_t s = 0; s < n; ++s) radix[s] = mdp.choices[s].size();
    std::vector<ProbReward> embedded;
    embedded.reserve(n);
    for (const auto& r : k) embedded.emplace_back(1.0, r);
    const Valuation<ProbReward> kv(std::move(embedded));

    std::vector<ExtReal> best(n);
    std::vector<std::size_t> choice(n, 0);
    do {
      const auto image = mc_step(resolve_choices(mdp, choice), kv);
      for (std::size_t s = 0; s < n; ++s) best[s] = max(best[s], image[s].second);
    } while (advance(choice, radix));
    return Valuation<ExtReal>(std::move(best));
  };
}

// --- operator values ---------------------------------------------------------------------

std::string word_index_label(const std::vector<std::string>& states, const std::vector<std::string>& alphabet,
                             const WordDomain& dom, std::size_t index) {
  const std::size_t id = index % dom.size();
  const std::string w = dom.length(id) == 0 ? "eps" : word_to_string(dom.word(id), alphabet);
  return "(" + states.at(index / dom.size()) + ", " + w + ")";
}

std::string lasso_index_label(const std::vector<std::string>& states, const std::vector<std::string>& labels,
                              const LassoDomain& dom, std::size_t index) {
  return "(" + states.at(index / dom.size()) + ", " + lasso_suffix_to_string(dom, index % dom.size(), labels) + ")";
}

Operator<ProbRewardLattice> make_mc_partial(const MarkovChain& mc) {
  return state_operator<ProbRewardLattice>("mc_partial", {}, mc.states,
                                           [mc](const Valuation<ProbReward>& k) { return step_mc_partial(mc, k); });
}

Operator<ExtRealLattice> make_mc_total(const MarkovChain& mc) {
  return state_operator<ExtRealLattice>("mc_total", {}, mc.states,
                                        [mc](const Valuation<ExtReal>& k) { return step_mc_total(mc, k); });
}

Operator<FrontierLattice> make_mdp_partial(const Mdp& mdp, std::size_t explosion_limit) {
  return state_operator<FrontierLattice>(
      "mdp_partial_frontier", {}, mdp.states,
      [mdp, explosion_limit](const Valuation<ParetoFrontier>& k) { return step_mdp_partial(mdp, k, explosion_limit); });
}

Operator<ExtRealLattice> make_mdp_total(const Mdp& mdp) {
  return state_operator<ExtRealLattice>("mdp_total", {}, mdp.states,
                                        [mdp](const Valuation<ExtReal>& k) { return step_mdp_total(mdp, k); });
}

Operator<BoundedNatLattice> make_resource(const ResourceGraph& g) {
  return state_operator<BoundedNatLattice>("resource_bounded", BoundedNatLattice(g.bound), g.states,
                                           [g](const Valuation<BoundedNat>& k) { return step_resource(g, k); });
}

Operator<Bool2Lattice> make_resource_reach(const ResourceGraph& g) {
  return state_operator<Bool2Lattice>("resource_reach", {}, g.states,
                                      [g](const Valuation<bool>& k) { return step_resource_reach(g, k); });
}

namespace {

template <class L, class F>
Operator<L> lasso_operator(std::string tag, const Dlts& d, const LassoDomain& dom, F f) {
  Operator<L> op;
  op.tag = std::move(tag);
  op.size = d.size() * dom.size();
  op.step = [d, dom, f](const Valuation<typename L::value_type>& k) { return f(d, dom, k); };
  op.label = [states = d.states, labels = d.labels, dom](std::size_t i) {
    return lasso_index_label(states, labels, dom, i);
  };
  return op;
}

template <class L, class F>
Operator<L> word_operator(std::string tag, const Nfa& n, const WordDomain& dom, F f) {
  Operator<L> op;
  op.tag = std::move(tag);
  op.size = n.size() * dom.size();
  op.step = [n, dom, f](const Valuation<typename L::value_type>& k) { return f(n, dom, k); };
  op.label = [states = n.states, alphabet = n.alphabet, dom](std::size_t i) {
    return word_index_label(states, alphabet, dom, i);
  };
  return op;
}

}  // namespace

Operator<Lex2Lattice> make_dlts_partial(const Dlts& d, const LassoDomain& dom) {
  return lasso_operator<Lex2Lattice>("dlts_partial", d, dom, step_dlts_partial);
}

Operator<Bool2Lattice> make_dlts_total(const Dlts& d, const LassoDomain& dom) {
  return lasso_operator<Bool2Lattice>("dlts_total", d, dom, step_dlts_total);
}

Operator<Bool2Lattice> make_ufa_lang(const Nfa& n, const WordDomain& dom) {
  return word_operator<Bool2Lattice>("ufa_lang", n, dom, step_ufa_lang);
}

Operator<ExtNatLattice> make_ufa_count(const Nfa& n, const WordDomain& dom) {
  return word_operator<ExtNatLattice>("ufa_count", n, dom, step_ufa_count);
}

Operator<BoolProbLattice> make_ufa_prob_lang(const Nfa& n, const MarkovChain& labels, const WordDomain& dom) {
  check_label_chain(n, labels);
  return word_operator<BoolProbLattice>(
      "ufa_prob_pair", n, dom,
      [labels](const Nfa& a, const WordDomain& w, const Valuation<BoolProb>& k) { return step_ufa_prob_lang(a, labels, w, k); });
}

Operator<CountRewardLattice> make_ufa_prob_count(const Nfa& n, const MarkovChain& labels, const WordDomain& dom) {
  check_label_chain(n, labels);
  return word_operator<CountRewardLattice>(
      "ufa_prob_pair", n, dom,
      [labels](const Nfa& a, const WordDomain& w, const Valuation<CountReward>& k) { return step_ufa_prob_count(a, labels, w, k); });
}

Operator<FrontierLattice> make_lift_partial(const Mdp& mdp, std::size_t explosion_limit) {
  auto lifted = lift_partial(step_mc_partial, explosion_limit);
  return state_operator<FrontierLattice>("lift_partial", {}, mdp.states,
                                         [mdp, lifted](const Valuation<ParetoFrontier>& k) { return lifted(mdp, k); });
}

Operator<ExtRealLattice> make_lift_total(const Mdp& mdp) {
  auto lifted = lift_total(step_mc_partial);
  return state_operator<ExtRealLattice>("lift_total", {}, mdp.states,
                                        [mdp, lifted](const Valuation<ExtReal>& k) { return lifted(mdp, k); });
}

}  // namespace reachcorr
