#ifndef GDV_CLI_HPP
#define GDV_CLI_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdv/good_deal.hpp"
#include "gdv/harness.hpp"
#include "gdv/indifference.hpp"
#include "gdv/scenario.hpp"
#include "gdv/shortfall.hpp"
#include "gdv/superhedge.hpp"

/// Command implementations behind the gdv executable. Each returns the JSON
/// report and the process exit code; text output is rendered from the JSON.
namespace gdv::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUndecided = 2, kMalformed = 3 };

struct Options {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  double tol = 1e-7;  // shortfall bisection width
};

struct Outcome {
  ordered_json report;
  int exit_code = kPass;
};

// ---- JSON pieces ----------------------------------------------------------

inline ordered_json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v + 0.0;  // no "-0"
}
inline ordered_json num(const Extended& e) { return e.is_finite() ? num(e.value()) : ordered_json(e.to_string()); }
inline ordered_json vec(std::span<const double> v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}
inline ordered_json vec(const std::vector<double>& v) { return vec(std::span<const double>(v)); }
inline ordered_json vec(const Claim& c) { return vec(c.span()); }
inline ordered_json vec(const Measure& m) { return vec(std::span<const double>(m.weights())); }

inline ordered_json condition_json(const ConditionResult& c) {
  ordered_json j;
  j["id"] = c.id;
  j["status"] = to_string(c.status);
  j["method"] = to_string(c.method);
  j["note"] = c.note;
  if (c.claim_witness) j["claim_witness"] = vec(*c.claim_witness);
  if (c.measure_witness) j["measure_witness"] = vec(*c.measure_witness);
  if (c.excess > 0.0) j["excess"] = num(c.excess);
  return j;
}

inline ordered_json gdv_json(const GdvCertificate& c) {
  ordered_json j;
  j["verdict"] = c.verdict ? "pass" : (c.exact ? "fail" : "undecided");
  j["decided_exactly"] = c.exact;
  j["exact_conditions_agree"] = c.consistent;
  j["conditions"] = ordered_json::array();
  for (const auto& r : c.conditions) j["conditions"].push_back(condition_json(r));
  return j;
}

inline int gdv_exit(const GdvCertificate& c) { return c.verdict ? kPass : (c.exact ? kFail : kUndecided); }

inline ordered_json ftap_json(const FtapReport& f) {
  ordered_json j;
  j["consistent_set_nonempty"] = f.q_nonempty;
  j["equivalent_measure_exists"] = f.qe_nonempty;
  j["no_free_lunch"] = f.nfl;
  j["one_attainable"] = f.one_in_M;
  if (f.consistent_witness) j["consistent_witness"] = vec(*f.consistent_witness);
  if (f.equivalent_witness) j["equivalent_witness"] = vec(*f.equivalent_witness);
  if (f.arbitrage) j["arbitrage_witness"] = vec(*f.arbitrage);
  if (f.one_hedge) j["one_hedge"] = vec(*f.one_hedge);
  j["cross_check"] = f.consistent() ? "agree" : "disagree";
  return j;
}

inline ordered_json relevance_json(const RelevanceCertificate& r) {
  ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["method"] = to_string(r.method);
  if (r.witness) j["witness"] = vec(*r.witness);
  if (r.kernel) j["kernel"] = vec(*r.kernel);
  j["kernel_search"] = r.kernel_search ? vec(*r.kernel_search) : ordered_json("empty");
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline int relevance_exit(const RelevanceCertificate& r) {
  return r.verdict == Relevance::relevant ? kPass : (r.verdict == Relevance::not_relevant ? kFail : kUndecided);
}

inline RiskMeasure require_risk(const Scenario& s) {
  auto r = s.risk_measure();
  if (!r) throw ScenarioError("/risk_measure", "this command needs a risk_measure");
  return *r;
}

// ---- commands ---------------------------------------------------------------

inline Outcome cmd_bounds(const Scenario& s, const std::string& claim_name, const Options& opt) {
  const Claim x = s.claim(claim_name);
  const MarketCone m = s.market();
  Outcome out;
  auto& r = out.report;
  r["command"] = "bounds";
  r["scenario"] = s.name;
  r["claim"] = claim_name;
  r["payoff"] = vec(x);
  const FtapReport f = ftap_report(m);
  if (!f.q_nonempty) {
    r["consistent_set"] = "empty";
    r["ftap"] = ftap_json(f);
    out.exit_code = kFail;
    return out;
  }
  const PriceBound b = no_arbitrage_bound(m, x);
  r["no_arbitrage"] = {{"bid", num(b.lower)}, {"ask", num(b.upper)}};
  if (auto rho = s.risk_measure()) {
    const GdvCertificate c = check_gdv(m, *rho, opt.trials, opt.seed);
    ordered_json g;
    g["certified_gdv"] = gdv_json(c)["verdict"];
    if (c.verdict) {
      g["bid"] = num(-(*rho)(x));
      g["ask"] = num((*rho)(-x));
    } else {
      ordered_json failed = ordered_json::array();
      for (const auto& cr : c.conditions) {
        if (cr.status == Status::fail) failed.push_back(cr.id);
      }
      g["failed_conditions"] = failed;
    }
    r["good_deal"] = g;
  }
  return out;
}

inline Outcome cmd_price(const Scenario& s, const std::string& claim_name, const std::string& mode,
                         const std::optional<std::string>& loss, const std::optional<double>& delta,
                         const Options& opt) {
  const Claim x = s.claim(claim_name);
  Outcome out;
  auto& r = out.report;
  r["command"] = "price";
  r["scenario"] = s.name;
  r["claim"] = claim_name;
  r["mode"] = mode;
  if (mode == "risk") {
    const RiskMeasure rho = require_risk(s);
    r["risk_measure"] = rho.kind();
    r["ask"] = num(rho(-x));
    r["bid"] = num(-rho(x));
  } else if (mode == "indiff") {
    const IndifferencePricer p(s.market(), require_risk(s));
    r["base"] = p.base().kind();
    if (p.degenerate()) {
      r["degenerate_offset"] = true;
      r["ray"] = vec(*p.degenerate_ray());
      out.exit_code = kUndecided;
      return out;
    }
    r["offset"] = num(p.offset());
    const auto ask = p.quote(-x), bid = p.quote(x);
    r["ask"] = num(ask.value);
    r["ask_hedge"] = vec(ask.hedge);
    r["bid"] = num(-bid.value);
    r["bid_hedge"] = vec(bid.hedge);
    r["solver"] = ask.method;
  } else if (mode == "shortfall") {
    ShortfallSpec spec = s.shortfall.value_or(ShortfallSpec{"power:2", 0.01});
    if (loss) spec.loss = *loss;
    if (delta) spec.delta = *delta;
    ShortfallOptions so;
    so.tol = opt.tol;
    const ShortfallMeasure sm(s.market(), LossFunction::parse(spec.loss), spec.delta, so);
    const double at0 = sm.price(Claim::constant(x.size(), 0.0));
    const double ask = sm.price(-x), bid = -sm.price(x);
    r["loss"] = spec.loss;
    r["delta"] = spec.delta;
    r["rho_at_zero"] = num(at0);
    r["raw"] = {{"ask", num(ask)}, {"bid", num(bid)}};
    r["normalized"] = {{"ask", num(ask - at0)}, {"bid", num(bid + at0)}};
    r["tolerance"] = opt.tol;
  } else {
    throw InvalidArgument("price: mode must be risk, indiff or shortfall");
  }
  return out;
}

inline Outcome cmd_check(const Scenario& s, const std::string& which, const Options& opt) {
  const MarketCone m = s.market();
  Outcome out;
  auto& r = out.report;
  r["command"] = "check";
  r["scenario"] = s.name;
  r["which"] = which;
  const bool all = which == "all";
  if (!all && which != "ftap" && which != "gdv" && which != "relevance" && which != "all-gdvs-relevant") {
    throw InvalidArgument("check: unknown --which '" + which + "'");
  }
  std::vector<int> codes;
  if (all || which == "ftap") {
    const FtapReport f = ftap_report(m);
    r["ftap"] = ftap_json(f);
    codes.push_back(f.nfl && f.qe_nonempty ? kPass : kFail);
  }
  std::optional<RiskMeasure> rho = s.risk_measure();
  if (!all && !rho && (which == "gdv" || which == "relevance")) require_risk(s);
  if (rho && (all || which == "gdv")) {
    const GdvCertificate c = check_gdv(m, *rho, opt.trials, opt.seed);
    r["gdv"] = gdv_json(c);
    codes.push_back(gdv_exit(c));
  }
  if (rho && (all || which == "relevance")) {
    const RelevanceCertificate c = check_relevance(m, *rho);
    r["relevance"] = relevance_json(c);
    codes.push_back(relevance_exit(c));
  }
  if (all || which == "all-gdvs-relevant") {
    ordered_json j;
    try {
      const AllRelevantReport a = check_all_gdvs_relevant(m);
      j["verdict"] = a.verdict ? "pass" : "fail";
      j["margin"] = num(a.margin);
      j["atom"] = s.atoms[a.atom];
      j["no_positive_claim_free"] = a.condition2;
      j["all_consistent_measures_equivalent"] = a.condition3;
      if (a.witness_gdv) {
        const auto& fl = std::get<FiniteListPenalty>(a.witness_gdv->penalty());
        ordered_json ms = ordered_json::array();
        for (const auto& q : fl.measures) ms.push_back(vec(q));
        j["witness_gdv"] = {{"kind", "finite_list"}, {"measures", ms}, {"penalties", vec(fl.penalties)}};
      }
      if (a.witness_claim) j["witness_claim"] = vec(*a.witness_claim);
      codes.push_back(a.verdict ? kPass : kFail);
    } catch (const PreconditionError&) {
      const FtapReport f = ftap_report(m);
      j["verdict"] = "fail";
      j["note"] = "no equivalent consistent measure, so no GDV is relevant";
      if (f.arbitrage) j["arbitrage_witness"] = vec(*f.arbitrage);
      codes.push_back(kFail);
    }
    r["all_gdvs_relevant"] = j;
  }
  int code = kPass;
  for (int c : codes) {
    if (c == kFail) code = kFail;
    else if (c == kUndecided && code == kPass) code = kUndecided;
  }
  r["exit_code"] = code;
  out.exit_code = code;
  return out;
}

/// Randomized condition-equivalence harness on random (market, GDV, non-GDV)
/// triples.
inline Outcome cmd_fuzz(std::size_t atoms, std::size_t generators, std::uint64_t seed, std::size_t iters) {
  if (atoms < 2) throw InvalidArgument("fuzz: need at least 2 atoms");
  std::mt19937_64 rng(seed);
  std::size_t gdv_agree = 0, non_gdv_checked = 0, non_gdv_agree = 0, relevance_agree = 0;
  ordered_json mismatches = ordered_json::array();
  for (std::size_t it = 0; it < iters; ++it) {
    const auto inst = harness::random_instance(rng, atoms, generators);
    const auto good = check_gdv(inst.market, inst.gdv, 20, seed + it);
    bool ok = good.verdict;
    for (const char* id : {"2", "3", "7", "4'"}) ok = ok && good.find(id)->status == Status::pass;
    if (ok) ++gdv_agree;
    else mismatches.push_back({{"iteration", it}, {"what", "gdv"}});
    if (inst.non_gdv) {
      ++non_gdv_checked;
      const auto bad = check_gdv(inst.market, *inst.non_gdv, 20, seed + it);
      bool b = !bad.verdict;
      for (const char* id : {"2", "3", "7"}) b = b && bad.find(id)->status == Status::fail;
      if (b) ++non_gdv_agree;
      else mismatches.push_back({{"iteration", it}, {"what", "non_gdv"}});
    }
    const auto rc = check_relevance(inst.market, inst.gdv);
    const auto z = extended_market(inst.market, inst.gdv).positive_witness();
    const bool rel_ok = (rc.verdict == Relevance::relevant) == !z.has_value() && (!z || inst.gdv(-*z) <= 1e-9);
    if (rel_ok) ++relevance_agree;
    else mismatches.push_back({{"iteration", it}, {"what", "relevance"}});
  }
  Outcome out;
  auto& r = out.report;
  r["command"] = "fuzz";
  r["atoms"] = atoms;
  r["generators"] = generators;
  r["seed"] = seed;
  r["iterations"] = iters;
  r["gdv_conditions_agree"] = gdv_agree;
  r["non_gdv_checked"] = non_gdv_checked;
  r["non_gdv_conditions_agree"] = non_gdv_agree;
  r["relevance_vs_extended_market_agree"] = relevance_agree;
  r["mismatches"] = mismatches;
  out.exit_code = mismatches.empty() ? kPass : kFail;
  return out;
}

// ---- text rendering -------------------------------------------------------

namespace detail {

inline void render(const ordered_json& j, const std::string& indent, std::string& out) {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out += indent + k + ":\n";
      render(v, indent + "  ", out);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out += indent + k + ":\n";
      for (const auto& e : v) {
        out += indent + "  -\n";
        render(e, indent + "    ", out);
      }
    } else {
      out += indent + k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
  }
}

}  // namespace detail

inline std::string render_text(const ordered_json& report) {
  std::string out;
  detail::render(report, "", out);
  return out;
}

}  // namespace gdv::cli

#endif  // GDV_CLI_HPP
