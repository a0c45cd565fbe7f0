#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace reachcorr {

/// Successor index denoting the target (terminal) node, which is not a state.
inline constexpr int kTarget = -1;
/// Spelling of the target in model files.
inline constexpr std::string_view kTargetName = "__target__";

class ModelError : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation };
  ModelError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Finite-support distribution over states and the target.
struct Distribution {
  std::vector<std::pair<int, double>> entries;  // (successor or kTarget, probability)

  double target_probability() const;
  double total() const;
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

struct MarkovChain {
  std::vector<std::string> states;
  std::vector<Distribution> transitions;
  std::vector<std::uint64_t> rewards;

  std::size_t size() const { return states.size(); }

  friend bool operator==(const MarkovChain&, const MarkovChain&) = default;
};

struct MdpChoice {
  Distribution dist;
  std::uint64_t reward = 0;

  friend bool operator==(const MdpChoice&, const MdpChoice&) = default;
};

struct Mdp {
  std::vector<std::string> states;
  std::vector<std::vector<MdpChoice>> choices;

  std::size_t size() const { return states.size(); }

  friend bool operator==(const Mdp&, const Mdp&) = default;
};

struct Nfa {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::vector<int>>> delta;  // [state][letter] -> sorted successors
  std::vector<bool> accepting;

  std::size_t size() const { return states.size(); }
  const std::vector<int>& successors(int state, int letter) const { return delta[state][letter]; }

  friend bool operator==(const Nfa&, const Nfa&) = default;
};

/// Deterministic labelled transition system with a terminal node.
struct Dlts {
  std::vector<std::string> states;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> step;  // [state][label] -> successor or kTarget
  std::vector<bool> safe;

  std::size_t size() const { return states.size(); }

  friend bool operator==(const Dlts&, const Dlts&) = default;
};

struct ResourceNode {
  bool target = false;
  std::vector<int> successors;
  std::uint64_t resource = 0;

  friend bool operator==(const ResourceNode&, const ResourceNode&) = default;
};

struct ResourceGraph {
  std::vector<std::string> states;
  std::vector<ResourceNode> nodes;
  int bound = 1;

  std::size_t size() const { return states.size(); }

  friend bool operator==(const ResourceGraph&, const ResourceGraph&) = default;
};

/// The infinite word prefix . loop^omega over label indices.
struct LassoWord {
  std::vector<int> prefix;
  std::vector<int> loop;

  friend bool operator==(const LassoWord&, const LassoWord&) = default;
};

using Model = std::variant<MarkovChain, Mdp, Nfa, Dlts, ResourceGraph>;

/// Parses and validates one model document. Throws ModelError.
Model load_model(std::string_view text);
Model load_model_file(const std::string& path);

/// Canonical JSON text of a model (stable key order).
std::string serialize_model(const Model& model);

/// Checks every record invariant; throws ModelError(Validation) naming the
/// first violation.
void validate(const MarkovChain& mc);
void validate(const Mdp& mdp);
void validate(const Nfa& nfa);
void validate(const Dlts& dlts);
void validate(const ResourceGraph& g);

/// Lasso words over `labels`, JSON: [{"prefix": [...], "loop": [...]}, ...].
std::vector<LassoWord> load_lasso_words(std::string_view text, const std::vector<std::string>& labels);

/// An MC as the MDP with one choice per state.
Mdp embed_mc_as_mdp(const MarkovChain& mc);
/// Inverse of embed_mc_as_mdp; throws ModelError if some state has several choices.
MarkovChain project_singleton_mdp(const Mdp& mdp);

std::string model_type_name(const Model& model);

}  // namespace reachcorr
