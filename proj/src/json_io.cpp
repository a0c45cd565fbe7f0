#include "reachcorr/json_io.hpp"

#include <cstdio>
#include <cstdlib>

namespace reachcorr {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number_json(double x) {
  const double rounded = std::strtod(format_number(x).c_str(), nullptr);
  if (rounded == 0.0) return 0.0;
  return rounded;
}

Json ext_real_json(ExtReal x) { return x.is_infinite() ? Json("inf") : number_json(x.value()); }

Json ext_nat_json(ExtNat x) { return x.is_infinite() ? Json("inf") : Json(x.value()); }

Json value_json(bool b) { return b; }
Json value_json(double x) { return number_json(x); }
Json value_json(ExtReal x) { return ext_real_json(x); }
Json value_json(ExtNat x) { return ext_nat_json(x); }
Json value_json(BoundedNat x) { return x.is_bottom() ? Json("bot") : Json(x.level); }
Json value_json(Lex2 x) { return Json::array({x.first, x.second}); }

Json value_json(const ParetoFrontier& f) {
  Json out = Json::array();
  for (const auto& p : f.points()) out.push_back(Json::array({number_json(p.prob), ext_real_json(p.reward)}));
  return out;
}

std::string frontier_to_string(const ParetoFrontier& f) {
  std::string out = "{";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& p = f.points()[i];
    out += (i ? ", (" : "(") + format_number(p.prob) + ", " + p.reward.to_string() + ")";
  }
  return out + "}";
}

Json verdict_to_json(const Verdict& v) {
  return Json{{"holds", v.holds()},
              {"outcome", outcome_name(v.outcome)},
              {"scope", scope_name(v.scope)},
              {"witnesses", v.witnesses},
              {"note", v.note}};
}

}  // namespace reachcorr
