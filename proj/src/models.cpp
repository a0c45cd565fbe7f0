#include "reachcorr/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace reachcorr {

using nlohmann::json;

namespace {

constexpr double kSumTolerance = 1e-9;

[[noreturn]] void invalid(const std::string& what) {
  throw ModelError(ModelError::Kind::Validation, what);
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Line/column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ModelError(ModelError::Kind::Parse, "parse error at line " + std::to_string(line) +
                                                   ", column " + std::to_string(col) + ": " +
                                                   e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(context + ": missing field \"" + key + "\"");
  return *it;
}

std::uint64_t as_nat(const json& v, const std::string& context) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  invalid(context + " must be a natural number");
}

double as_prob(const json& v, const std::string& context) {
  if (!v.is_number()) invalid(context + " must be a number");
  const double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) invalid(context + " = " + fmt12(p) + " is outside [0,1]");
  return p;
}

/// Dense indices for the state list; rejects duplicates and the target name.
class StateIndex {
 public:
  StateIndex(const json& doc, const char* key = "states") {
    const json& arr = field(doc, key, "model");
    if (!arr.is_array()) invalid(std::string("\"") + key + "\" must be an array");
    for (const auto& s : arr) {
      if (!s.is_string()) invalid(std::string("\"") + key + "\" entries must be strings");
      const auto name = s.get<std::string>();
      if (name == kTargetName) invalid("\"__target__\" is reserved and may not be a state");
      if (!index_.emplace(name, static_cast<int>(names_.size())).second) {
        invalid("duplicate state \"" + name + "\"");
      }
      names_.push_back(name);
    }
  }

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  int lookup(const std::string& name, const std::string& context) const {
    auto it = index_.find(name);
    if (it == index_.end()) invalid(context + ": unknown state \"" + name + "\"");
    return it->second;
  }
  int lookup_or_target(const std::string& name, const std::string& context) const {
    if (name == kTargetName) return kTarget;
    return lookup(name, context);
  }
  /// Every key of `obj` must name a state.
  void check_keys(const json& obj, const std::string& context) const {
    if (!obj.is_object()) invalid(context + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) lookup(it.key(), context);
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

/// Symbol table for alphabets / label sets.
std::map<std::string, int> symbol_table(const std::vector<std::string>& symbols, const char* what) {
  std::map<std::string, int> table;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!table.emplace(symbols[i], static_cast<int>(i)).second) {
      invalid(std::string("duplicate ") + what + " \"" + symbols[i] + "\"");
    }
  }
  return table;
}

std::vector<std::string> string_array(const json& v, const std::string& context) {
  if (!v.is_array()) invalid(context + " must be an array");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) invalid(context + " entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

Distribution parse_distribution(const json& obj, const StateIndex& states, const std::string& context) {
  if (!obj.is_object()) invalid(context + " must be an object");
  Distribution d;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const int succ = states.lookup_or_target(it.key(), context);
    d.entries.emplace_back(succ, as_prob(it.value(), context + " -> " + it.key()));
  }
  std::sort(d.entries.begin(), d.entries.end());
  return d;
}

void check_distribution(const Distribution& d, std::size_t n, const std::string& where) {
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    const auto [succ, p] = d.entries[i];
    if (succ != kTarget && (succ < 0 || static_cast<std::size_t>(succ) >= n)) {
      invalid("distribution at " + where + " refers to an unknown state");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      invalid("probability " + fmt12(p) + " at " + where + " is outside [0,1]");
    }
    if (i > 0 && d.entries[i - 1].first == succ) {
      invalid("distribution at " + where + " lists a successor twice");
    }
  }
  const double total = d.total();
  if (std::fabs(total - 1.0) > kSumTolerance) {
    invalid("distribution at " + where + " sums to " + fmt12(total));
  }
}

void check_names(const std::vector<std::string>& states) {
  std::set<std::string> seen;
  for (const auto& s : states) {
    if (s == kTargetName) invalid("\"__target__\" is reserved and may not be a state");
    if (!seen.insert(s).second) invalid("duplicate state \"" + s + "\"");
  }
}

// --- per-type parsers -------------------------------------------------------

MarkovChain parse_mc(const json& doc) {
  const StateIndex states(doc);
  MarkovChain mc;
  mc.states = states.names();
  mc.transitions.resize(states.size());
  mc.rewards.assign(states.size(), 0);
  const json& trans = field(doc, "transitions", "mc");
  states.check_keys(trans, "transitions");
  for (std::size_t s = 0; s < states.size(); ++s) {
    auto it = trans.find(mc.states[s]);
    if (it == trans.end()) invalid("transitions: missing distribution for state \"" + mc.states[s] + "\"");
    mc.transitions[s] = parse_distribution(*it, states, "transitions of " + mc.states[s]);
  }
  if (auto it = doc.find("rewards"); it != doc.end()) {
    states.check_keys(*it, "rewards");
    for (auto r = it->begin(); r != it->end(); ++r) {
      mc.rewards[states.lookup(r.key(), "rewards")] = as_nat(r.value(), "reward of " + r.key());
    }
  }
  validate(mc);
  return mc;
}

Mdp parse_mdp(const json& doc) {
  const StateIndex states(doc);
  Mdp mdp;
  mdp.states = states.names();
  mdp.choices.resize(states.size());
  const json& choices = field(doc, "choices", "mdp");
  states.check_keys(choices, "choices");
  for (std::size_t s = 0; s < states.size(); ++s) {
    auto it = choices.find(mdp.states[s]);
    if (it == choices.end()) invalid("c(" + mdp.states[s] + ") must be non-empty");
    if (!it->is_array()) invalid("choices of " + mdp.states[s] + " must be an array");
    for (const auto& c : *it) {
      const std::string ctx = "choice of " + mdp.states[s];
      MdpChoice choice;
      choice.dist = parse_distribution(field(c, "dist", ctx), states, ctx);
      if (auto r = c.find("reward"); r != c.end()) choice.reward = as_nat(*r, ctx + " reward");
      mdp.choices[s].push_back(std::move(choice));
    }
  }
  validate(mdp);
  return mdp;
}

Nfa parse_nfa(const json& doc) {
  const StateIndex states(doc);
  Nfa nfa;
  nfa.states = states.names();
  nfa.alphabet = string_array(field(doc, "alphabet", "nfa"), "alphabet");
  const auto letters = symbol_table(nfa.alphabet, "letter");
  nfa.delta.assign(states.size(), std::vector<std::vector<int>>(nfa.alphabet.size()));
  nfa.accepting.assign(states.size(), false);
  const json& delta = field(doc, "delta", "nfa");
  states.check_keys(delta, "delta");
  for (auto it = delta.begin(); it != delta.end(); ++it) {
    const int s = states.lookup(it.key(), "delta");
    if (!it->is_object()) invalid("delta of " + it.key() + " must be an object");
    for (auto l = it->begin(); l != it->end(); ++l) {
      auto letter = letters.find(l.key());
      if (letter == letters.end()) invalid("delta of " + it.key() + ": unknown letter \"" + l.key() + "\"");
      auto& succ = nfa.delta[s][letter->second];
      for (const auto& t : string_array(l.value(), "delta successors")) {
        succ.push_back(states.lookup(t, "delta of " + it.key()));
      }
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
  }
  for (const auto& a : string_array(field(doc, "accepting", "nfa"), "accepting")) {
    nfa.accepting[states.lookup(a, "accepting")] = true;
  }
  validate(nfa);
  return nfa;
}

Dlts parse_dlts(const json& doc) {
  const StateIndex states(doc);
  Dlts d;
  d.states = states.names();
  d.labels = string_array(field(doc, "labels", "dlts"), "labels");
  const auto labels = symbol_table(d.labels, "label");
  d.step.assign(states.size(), std::vector<int>(d.labels.size(), kTarget));
  d.safe.assign(states.size(), false);
  const json& step = field(doc, "step", "dlts");
  states.check_keys(step, "step");
  for (std::size_t s = 0; s < states.size(); ++s) {
    auto it = step.find(d.states[s]);
    if (it == step.end() || !it->is_object()) invalid("step of " + d.states[s] + " must be an object");
    for (auto l = it->begin(); l != it->end(); ++l) {
      if (!labels.count(l.key())) invalid("step of " + d.states[s] + ": unknown label \"" + l.key() + "\"");
    }
    for (std::size_t l = 0; l < d.labels.size(); ++l) {
      auto t = it->find(d.labels[l]);
      if (t == it->end()) {
        invalid("step of " + d.states[s] + " is not total: no successor on \"" + d.labels[l] + "\"");
      }
      if (!t->is_string()) invalid("step of " + d.states[s] + " must map labels to one state");
      d.step[s][l] = states.lookup_or_target(t->get<std::string>(), "step of " + d.states[s]);
    }
  }
  for (const auto& a : string_array(field(doc, "safe", "dlts"), "safe")) {
    d.safe[states.lookup(a, "safe")] = true;
  }
  validate(d);
  return d;
}

ResourceGraph parse_resource(const json& doc) {
  const StateIndex states(doc);
  ResourceGraph g;
  g.states = states.names();
  const json& bound = field(doc, "bound", "resource");
  const std::uint64_t m = as_nat(bound, "bound");
  if (m < 1) invalid("bound M must be at least 1");
  if (m > 1000000) invalid("bound M is unreasonably large");
  g.bound = static_cast<int>(m);
  g.nodes.resize(states.size());
  const json& nodes = field(doc, "nodes", "resource");
  states.check_keys(nodes, "nodes");
  for (std::size_t s = 0; s < states.size(); ++s) {
    auto it = nodes.find(g.states[s]);
    if (it == nodes.end()) invalid("nodes: missing entry for state \"" + g.states[s] + "\"");
    auto& node = g.nodes[s];
    if (it->is_string()) {
      if (it->get<std::string>() != kTargetName) invalid("node " + g.states[s] + " must be \"__target__\" or an object");
      node.target = true;
      continue;
    }
    const std::string ctx = "node " + g.states[s];
    for (const auto& t : string_array(field(*it, "succ", ctx), ctx + " succ")) {
      node.successors.push_back(states.lookup(t, ctx));
    }
    std::sort(node.successors.begin(), node.successors.end());
    node.successors.erase(std::unique(node.successors.begin(), node.successors.end()), node.successors.end());
    node.resource = as_nat(field(*it, "resource", ctx), ctx + " resource");
  }
  validate(g);
  return g;
}

// --- serialization ------------------------------------------------------------

std::string target_or_state(const std::vector<std::string>& states, int idx) {
  return idx == kTarget ? std::string(kTargetName) : states[idx];
}

json dist_json(const Distribution& d, const std::vector<std::string>& states) {
  json o = json::object();
  for (const auto& [succ, p] : d.entries) o[target_or_state(states, succ)] = p;
  return o;
}

json to_json(const MarkovChain& mc) {
  json doc{{"type", "mc"}, {"states", mc.states}};
  json trans = json::object();
  json rew = json::object();
  for (std::size_t s = 0; s < mc.size(); ++s) {
    trans[mc.states[s]] = dist_json(mc.transitions[s], mc.states);
    rew[mc.states[s]] = mc.rewards[s];
  }
  doc["transitions"] = trans;
  doc["rewards"] = rew;
  return doc;
}

json to_json(const Mdp& mdp) {
  json doc{{"type", "mdp"}, {"states", mdp.states}};
  json choices = json::object();
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    json arr = json::array();
    for (const auto& c : mdp.choices[s]) {
      arr.push_back({{"dist", dist_json(c.dist, mdp.states)}, {"reward", c.reward}});
    }
    choices[mdp.states[s]] = arr;
  }
  doc["choices"] = choices;
  return doc;
}

json to_json(const Nfa& nfa) {
  json doc{{"type", "nfa"}, {"states", nfa.states}, {"alphabet", nfa.alphabet}};
  json delta = json::object();
  json acc = json::array();
  for (std::size_t s = 0; s < nfa.size(); ++s) {
    json row = json::object();
    for (std::size_t a = 0; a < nfa.alphabet.size(); ++a) {
      json succ = json::array();
      for (int t : nfa.delta[s][a]) succ.push_back(nfa.states[t]);
      row[nfa.alphabet[a]] = succ;
    }
    delta[nfa.states[s]] = row;
    if (nfa.accepting[s]) acc.push_back(nfa.states[s]);
  }
  doc["delta"] = delta;
  doc["accepting"] = acc;
  return doc;
}

json to_json(const Dlts& d) {
  json doc{{"type", "dlts"}, {"states", d.states}, {"labels", d.labels}};
  json step = json::object();
  json safe = json::array();
  for (std::size_t s = 0; s < d.size(); ++s) {
    json row = json::object();
    for (std::size_t l = 0; l < d.labels.size(); ++l) row[d.labels[l]] = target_or_state(d.states, d.step[s][l]);
    step[d.states[s]] = row;
    if (d.safe[s]) safe.push_back(d.states[s]);
  }
  doc["step"] = step;
  doc["safe"] = safe;
  return doc;
}

json to_json(const ResourceGraph& g) {
  json doc{{"type", "resource"}, {"states", g.states}, {"bound", g.bound}};
  json nodes = json::object();
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto& n = g.nodes[s];
    if (n.target) {
      nodes[g.states[s]] = kTargetName;
    } else {
      json succ = json::array();
      for (int t : n.successors) succ.push_back(g.states[t]);
      nodes[g.states[s]] = {{"succ", succ}, {"resource", n.resource}};
    }
  }
  doc["nodes"] = nodes;
  return doc;
}

}  // namespace

double Distribution::target_probability() const {
  for (const auto& [succ, p] : entries) {
    if (succ == kTarget) return p;
  }
  return 0.0;
}

double Distribution::total() const {
  double t = 0.0;
  for (const auto& e : entries) t += e.second;
  return t;
}

void validate(const MarkovChain& mc) {
  check_names(mc.states);
  if (mc.transitions.size() != mc.size() || mc.rewards.size() != mc.size()) {
    invalid("mc: transitions and rewards must cover every state");
  }
  for (std::size_t s = 0; s < mc.size(); ++s) check_distribution(mc.transitions[s], mc.size(), mc.states[s]);
}

void validate(const Mdp& mdp) {
  check_names(mdp.states);
  if (mdp.choices.size() != mdp.size()) invalid("mdp: choices must cover every state");
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    if (mdp.choices[s].empty()) invalid("c(" + mdp.states[s] + ") must be non-empty");
    for (std::size_t c = 0; c < mdp.choices[s].size(); ++c) {
      check_distribution(mdp.choices[s][c].dist, mdp.size(), mdp.states[s] + " choice " + std::to_string(c));
    }
  }
}

void validate(const Nfa& nfa) {
  check_names(nfa.states);
  symbol_table(nfa.alphabet, "letter");
  if (nfa.delta.size() != nfa.size() || nfa.accepting.size() != nfa.size()) {
    invalid("nfa: delta and accepting must cover every state");
  }
  for (std::size_t s = 0; s < nfa.size(); ++s) {
    if (nfa.delta[s].size() != nfa.alphabet.size()) invalid("nfa: delta of " + nfa.states[s] + " is not total over the alphabet");
    for (const auto& succ : nfa.delta[s]) {
      for (int t : succ) {
        if (t < 0 || static_cast<std::size_t>(t) >= nfa.size()) invalid("nfa: delta of " + nfa.states[s] + " refers to an unknown state");
      }
    }
  }
}

void validate(const Dlts& d) {
  check_names(d.states);
  symbol_table(d.labels, "label");
  if (d.step.size() != d.size() || d.safe.size() != d.size()) invalid("dlts: step and safe must cover every state");
  for (std::size_t s = 0; s < d.size(); ++s) {
    if (d.step[s].size() != d.labels.size()) invalid("dlts: step of " + d.states[s] + " is not total");
    for (int t : d.step[s]) {
      if (t != kTarget && (t < 0 || static_cast<std::size_t>(t) >= d.size())) {
        invalid("dlts: step of " + d.states[s] + " refers to an unknown state");
      }
    }
  }
}

void validate(const ResourceGraph& g) {
  check_names(g.states);
  if (g.bound < 1) invalid("bound M must be at least 1");
  if (g.nodes.size() != g.size()) invalid("resource: nodes must cover every state");
  for (std::size_t s = 0; s < g.size(); ++s) {
    for (int t : g.nodes[s].successors) {
      if (t < 0 || static_cast<std::size_t>(t) >= g.size()) invalid("resource: node " + g.states[s] + " refers to an unknown state");
    }
  }
}

Model load_model(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) invalid("model document must be a JSON object");
  const json& type = field(doc, "type", "model");
  if (!type.is_string()) invalid("\"type\" must be a string");
  const auto t = type.get<std::string>();
  if (t == "mc") return parse_mc(doc);
  if (t == "mdp") return parse_mdp(doc);
  if (t == "nfa") return parse_nfa(doc);
  if (t == "dlts") return parse_dlts(doc);
  if (t == "resource") return parse_resource(doc);
  invalid("unknown model type \"" + t + "\"");
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(ModelError::Kind::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

std::string serialize_model(const Model& model) {
  return std::visit([](const auto& m) { return to_json(m).dump(2); }, model);
}

std::vector<LassoWord> load_lasso_words(std::string_view text, const std::vector<std::string>& labels) {
  const json doc = parse_json(text);
  if (!doc.is_array()) invalid("lasso word file must be a JSON array");
  const auto table = symbol_table(labels, "label");
  auto letters = [&](const json& arr, const std::string& ctx) {
    std::vector<int> out;
    for (const auto& l : string_array(arr, ctx)) {
      auto it = table.find(l);
      if (it == table.end()) invalid(ctx + ": unknown label \"" + l + "\"");
      out.push_back(it->second);
    }
    return out;
  };
  std::vector<LassoWord> words;
  for (const auto& w : doc) {
    LassoWord lw;
    if (auto p = w.find("prefix"); p != w.end()) lw.prefix = letters(*p, "lasso prefix");
    lw.loop = letters(field(w, "loop", "lasso word"), "lasso loop");
    if (lw.loop.empty()) invalid("lasso loop must be non-empty");
    words.push_back(std::move(lw));
  }
  return words;
}

Mdp embed_mc_as_mdp(const MarkovChain& mc) {
  Mdp mdp;
  mdp.states = mc.states;
  mdp.choices.resize(mc.size());
  for (std::size_t s = 0; s < mc.size(); ++s) mdp.choices[s].push_back({mc.transitions[s], mc.rewards[s]});
  return mdp;
}

MarkovChain project_singleton_mdp(const Mdp& mdp) {
  MarkovChain mc;
  mc.states = mdp.states;
  for (std::size_t s = 0; s < mdp.size(); ++s) {
    if (mdp.choices[s].size() != 1) invalid("state " + mdp.states[s] + " has " + std::to_string(mdp.choices[s].size()) + " choices");
    mc.transitions.push_back(mdp.choices[s][0].dist);
    mc.rewards.push_back(mdp.choices[s][0].reward);
  }
  return mc;
}

std::string model_type_name(const Model& model) {
  static const char* names[] = {"mc", "mdp", "nfa", "dlts", "resource"};
  return names[model.index()];
}

}  // namespace reachcorr
