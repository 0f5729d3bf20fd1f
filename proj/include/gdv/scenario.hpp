#ifndef GDV_SCENARIO_HPP
#define GDV_SCENARIO_HPP

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gdv/market.hpp"
#include "gdv/risk_measure.hpp"
#include "gdv/shortfall.hpp"

/// Scenario files: JSON, schema_version 1.
///
///   {
///     "schema_version": 1,
///     "name": "...", "description": "...",          (optional strings)
///     "space": {"atoms": ["w0", ...], "probabilities": [0.5, ...]},
///     "market": {"generators": [[...], ...]},
///     "risk_measure": {"kind": "finite_list", "measures": [[...]], "penalties": [...]}
///                   | {"kind": "worst_case", "polytope": "consistent" | "simplex" | [[h...], ...]}
///                   | {"kind": "quadratic_example"}
///                   | {"kind": "entropic", "gamma": 1.0}
///                   | {"kind": "entropic_on_polytope", "gamma": 1.0, "polytope": ...},   (optional)
///     "shortfall": {"loss": "power:2", "delta": 0.01},                                   (optional)
///     "claims": {"name": [...], ...}
///   }
///
/// A polytope given as rows means {Q : E_Q[h] <= 0 for each row h}.
namespace gdv {

using ordered_json = nlohmann::ordered_json;

class ScenarioError : public InvalidArgument {
 public:
  ScenarioError(std::string pointer, const std::string& what)
      : InvalidArgument((pointer.empty() ? std::string("scenario") : pointer) + ": " + what), pointer_(std::move(pointer)) {}
  /// JSON pointer of the offending field ("" for the document, or "line L col C").
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct RiskSpec {
  std::string kind;
  std::vector<std::vector<double>> measures;
  std::vector<double> penalties;
  std::string polytope;                       // consistent | simplex | rows
  std::vector<std::vector<double>> rows;      // when polytope == "rows"
  double gamma = 0.0;
  bool operator==(const RiskSpec&) const = default;
};

struct ShortfallSpec {
  std::string loss;
  double delta = 0.0;
  bool operator==(const ShortfallSpec&) const = default;
};

struct Scenario {
  int schema_version = 1;
  std::string name, description;
  std::vector<std::string> atoms;
  std::vector<double> probabilities;
  std::vector<std::vector<double>> generators;
  std::optional<RiskSpec> risk;
  std::optional<ShortfallSpec> shortfall;
  std::vector<std::pair<std::string, std::vector<double>>> claims;

  bool operator==(const Scenario&) const = default;

  Space space() const { return Space(atoms, probabilities); }
  MarketCone market() const {
    std::vector<Claim> g;
    for (const auto& v : generators) g.emplace_back(v);
    return MarketCone(space(), std::move(g));
  }

  MeasurePolytope polytope(const RiskSpec& r) const {
    if (r.polytope == "consistent") return consistent_set(market());
    if (r.polytope == "simplex") return MeasurePolytope::simplex(space());
    return MeasurePolytope(space(), r.rows);
  }

  std::optional<RiskMeasure> risk_measure() const {
    if (!risk) return std::nullopt;
    const RiskSpec& r = *risk;
    if (r.kind == "finite_list") {
      std::vector<Measure> ms;
      for (const auto& m : r.measures) ms.emplace_back(m);
      return RiskMeasure::finite_list(space(), std::move(ms), r.penalties);
    }
    if (r.kind == "worst_case") return RiskMeasure::worst_case(polytope(r));
    if (r.kind == "quadratic_example") return RiskMeasure::quadratic_example(space());
    if (r.kind == "entropic") return RiskMeasure::entropic(space(), r.gamma);
    return RiskMeasure::entropic_on_polytope(r.gamma, polytope(r));
  }

  std::optional<ShortfallMeasure> shortfall_measure(ShortfallOptions opt = {}) const {
    if (!shortfall) return std::nullopt;
    return ShortfallMeasure(market(), LossFunction::parse(shortfall->loss), shortfall->delta, opt);
  }

  const std::vector<double>* find_claim(const std::string& n) const {
    for (const auto& [k, v] : claims) {
      if (k == n) return &v;
    }
    return nullptr;
  }
  Claim claim(const std::string& n) const {
    if (const auto* v = find_claim(n)) return Claim(*v);
    std::string known;
    for (const auto& [k, v] : claims) known += (known.empty() ? "" : ", ") + k;
    throw ScenarioError("/claims", "unknown claim '" + n + "' (known: " + known + ")");
  }
};

namespace detail {

inline std::string child(const std::string& ptr, const std::string& key) {
  std::string esc;
  for (char ch : key) {
    if (ch == '~') esc += "~0";
    else if (ch == '/') esc += "~1";
    else esc += ch;
  }
  return ptr + "/" + esc;
}
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

inline const ordered_json& require(const ordered_json& j, const std::string& ptr, const std::string& key) {
  if (!j.contains(key)) throw ScenarioError(child(ptr, key), "missing required field");
  return j.at(key);
}

inline void only_keys(const ordered_json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ScenarioError(ptr, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw ScenarioError(child(ptr, k), "unknown field");
  }
}

inline double number(const ordered_json& j, const std::string& ptr) {
  if (!j.is_number()) throw ScenarioError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(ptr, "number must be finite");
  return v;
}

inline std::string string_field(const ordered_json& j, const std::string& ptr) {
  if (!j.is_string()) throw ScenarioError(ptr, "expected a string");
  return j.get<std::string>();
}

inline std::vector<double> vector_of(const ordered_json& j, const std::string& ptr, std::size_t n) {
  if (!j.is_array()) throw ScenarioError(ptr, "expected an array of numbers");
  if (n != 0 && j.size() != n) {
    throw ScenarioError(ptr, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  }
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], child(ptr, i)));
  return v;
}

inline std::vector<std::vector<double>> matrix_of(const ordered_json& j, const std::string& ptr, std::size_t n) {
  if (!j.is_array()) throw ScenarioError(ptr, "expected an array of arrays");
  std::vector<std::vector<double>> m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(vector_of(j[i], child(ptr, i), n));
  return m;
}

inline void polytope_from(const ordered_json& j, const std::string& ptr, std::size_t n, RiskSpec& r) {
  if (j.is_string()) {
    r.polytope = j.get<std::string>();
    if (r.polytope != "consistent" && r.polytope != "simplex") {
      throw ScenarioError(ptr, "expected \"consistent\", \"simplex\" or an array of rows");
    }
  } else {
    r.polytope = "rows";
    r.rows = matrix_of(j, ptr, n);
  }
}

inline ordered_json polytope_to(const RiskSpec& r) {
  if (r.polytope == "rows") return ordered_json(r.rows);
  return ordered_json(r.polytope);
}

// Rethrows model validation errors at the given field.
template <class F>
auto at_field(const std::string& ptr, F&& f) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(ptr, e.what());
  }
}

}  // namespace detail

inline Scenario scenario_from_json(const ordered_json& j) {
  using namespace detail;
  only_keys(j, "", {"schema_version", "name", "description", "space", "market", "risk_measure", "shortfall", "claims"});
  Scenario s;
  const auto& ver = require(j, "", "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != 1) throw ScenarioError("/schema_version", "only schema_version 1 is supported");
  if (j.contains("name")) s.name = string_field(j["name"], "/name");
  if (j.contains("description")) s.description = string_field(j["description"], "/description");

  const auto& sp = require(j, "", "space");
  only_keys(sp, "/space", {"atoms", "probabilities"});
  const auto& atoms = require(sp, "/space", "atoms");
  if (!atoms.is_array() || atoms.empty()) throw ScenarioError("/space/atoms", "expected a nonempty array of labels");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    s.atoms.push_back(string_field(atoms[i], child("/space/atoms", i)));
    for (std::size_t k = 0; k + 1 < s.atoms.size(); ++k) {
      if (s.atoms[k] == s.atoms.back()) throw ScenarioError(child("/space/atoms", i), "duplicate atom label");
    }
  }
  const std::size_t n = s.atoms.size();
  s.probabilities = vector_of(require(sp, "/space", "probabilities"), "/space/probabilities", n);
  at_field("/space/probabilities", [&] { return s.space(); });

  const auto& mk = require(j, "", "market");
  only_keys(mk, "/market", {"generators"});
  s.generators = matrix_of(require(mk, "/market", "generators"), "/market/generators", n);

  if (j.contains("risk_measure")) {
    const auto& rj = j["risk_measure"];
    const std::string ptr = "/risk_measure";
    if (!rj.is_object()) throw ScenarioError(ptr, "expected an object");
    RiskSpec r;
    r.kind = string_field(require(rj, ptr, "kind"), ptr + "/kind");
    if (r.kind == "finite_list") {
      only_keys(rj, ptr, {"kind", "measures", "penalties"});
      r.measures = matrix_of(require(rj, ptr, "measures"), ptr + "/measures", n);
      r.penalties = vector_of(require(rj, ptr, "penalties"), ptr + "/penalties", r.measures.size());
    } else if (r.kind == "worst_case") {
      only_keys(rj, ptr, {"kind", "polytope"});
      polytope_from(require(rj, ptr, "polytope"), ptr + "/polytope", n, r);
    } else if (r.kind == "quadratic_example") {
      only_keys(rj, ptr, {"kind"});
    } else if (r.kind == "entropic" || r.kind == "entropic_on_polytope") {
      if (r.kind == "entropic") {
        only_keys(rj, ptr, {"kind", "gamma"});
      } else {
        only_keys(rj, ptr, {"kind", "gamma", "polytope"});
        polytope_from(require(rj, ptr, "polytope"), ptr + "/polytope", n, r);
      }
      r.gamma = number(require(rj, ptr, "gamma"), ptr + "/gamma");
    } else {
      throw ScenarioError(ptr + "/kind", "unknown risk measure kind '" + r.kind + "'");
    }
    s.risk = std::move(r);
    at_field(ptr, [&] { return s.risk_measure(); });
  }

  if (j.contains("shortfall")) {
    const auto& sj = j["shortfall"];
    only_keys(sj, "/shortfall", {"loss", "delta"});
    ShortfallSpec f;
    f.loss = string_field(require(sj, "/shortfall", "loss"), "/shortfall/loss");
    f.delta = number(require(sj, "/shortfall", "delta"), "/shortfall/delta");
    at_field("/shortfall/loss", [&] { return LossFunction::parse(f.loss); });
    if (!(f.delta > 0.0)) throw ScenarioError("/shortfall/delta", "delta must be > 0");
    s.shortfall = std::move(f);
  }

  const auto& cl = require(j, "", "claims");
  if (!cl.is_object()) throw ScenarioError("/claims", "expected an object of name: payoff");
  for (const auto& [k, v] : cl.items()) s.claims.emplace_back(k, vector_of(v, child("/claims", k), n));
  return s;
}

inline ordered_json to_json(const Scenario& s) {
  ordered_json j;
  j["schema_version"] = s.schema_version;
  if (!s.name.empty()) j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["space"] = {{"atoms", s.atoms}, {"probabilities", s.probabilities}};
  j["market"] = {{"generators", s.generators}};
  if (s.risk) {
    const RiskSpec& r = *s.risk;
    ordered_json rj;
    rj["kind"] = r.kind;
    if (r.kind == "finite_list") {
      rj["measures"] = r.measures;
      rj["penalties"] = r.penalties;
    }
    if (r.kind == "entropic" || r.kind == "entropic_on_polytope") rj["gamma"] = r.gamma;
    if (r.kind == "worst_case" || r.kind == "entropic_on_polytope") rj["polytope"] = detail::polytope_to(r);
    j["risk_measure"] = rj;
  }
  if (s.shortfall) j["shortfall"] = {{"loss", s.shortfall->loss}, {"delta", s.shortfall->delta}};
  ordered_json cl = ordered_json::object();
  for (const auto& [k, v] : s.claims) cl[k] = v;
  j["claims"] = cl;
  return j;
}

inline Scenario parse_scenario(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("line " + std::to_string(line) + " col " + std::to_string(col), "invalid JSON");
  }
  return scenario_from_json(j);
}

inline std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace gdv

#endif  // GDV_SCENARIO_HPP
