#pragma once

#include <functional>
#include <string>

#include "json.hpp"
#include "reachcorr/lattice.hpp"
#include "reachcorr/reachability.hpp"

namespace reachcorr {

using Json = nlohmann::json;

/// Rounded to 12 significant digits.
Json number_json(double x);
/// A number, or the string "inf".
Json ext_real_json(ExtReal x);
Json ext_nat_json(ExtNat x);

Json value_json(bool b);
Json value_json(double x);
Json value_json(ExtReal x);
Json value_json(ExtNat x);
/// Level, or the string "bot".
Json value_json(BoundedNat x);
/// [first, second]
Json value_json(Lex2 x);
/// [[prob, reward], ...] in canonical order.
Json value_json(const ParetoFrontier& f);
template <class A, class B>
Json value_json(const std::pair<A, B>& p) {
  return Json::array({value_json(p.first), value_json(p.second)});
}

/// {label(i): value} for every index.
template <class T>
Json valuation_json(const Valuation<T>& v, const std::function<std::string(std::size_t)>& label) {
  Json out = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) out[label(i)] = value_json(static_cast<T>(v[i]));
  return out;
}

std::string frontier_to_string(const ParetoFrontier& f);
std::string format_number(double x);

Json verdict_to_json(const Verdict& v);

}  // namespace reachcorr
