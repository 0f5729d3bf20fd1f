// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gdv/gdv.hpp"
#include "gdv/harness.hpp"
#include "gdv/scenario.hpp"

using namespace gdv;

namespace {

Scenario bundled(const std::string& name) { return load_scenario(std::string(GDV_SCENARIO_DIR) + "/" + name + ".json"); }

const std::vector<std::string> kBundled = {"two_state_quadratic", "arbitrage_example", "arrow_debreu",
                                           "arrow_debreu_n2", "frictionless"};

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what + "; ";
    ok = ok && cond;
  }
};

bool same_set(std::vector<Measure> a, std::vector<std::vector<double>> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& v : b) {
    bool hit = false;
    for (const auto& w : a) {
      bool eq = true;
      for (std::size_t i = 0; i < v.size(); ++i) eq = eq && std::abs(w[i] - v[i]) <= tol;
      hit = hit || eq;
    }
    if (!hit) return false;
  }
  return true;
}

// 1. noncoherent quadratic example
Check criterion1() {
  Check c;
  const Scenario s = bundled("two_state_quadratic");
  const MarketCone m = s.market();
  const RiskMeasure rho = *s.risk_measure();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double z1 = -2.0 + 4.0 * i / 9.0, z2 = -2.0 + 4.0 * j / 9.0;
      // sup_q {q z1 + (1 - q) z2 - q^2}: stationary point clamped to [0, 1]
      const double q = std::clamp((z1 - z2) / 2.0, 0.0, 1.0);
      const double oracle = q * z1 + (1.0 - q) * z2 - q * q;
      worst = std::max(worst, std::abs(rho(-Claim({z1, z2})) - oracle));
    }
  }
  c.require(worst <= 1e-6, "value mismatch " + detail::format_double(worst));
  const auto rc = check_relevance(m, rho);
  c.require(rc.verdict == Relevance::relevant, "relevance verdict");
  c.require(rc.method == RelevanceMethod::grid, "relevance method not grid");
  c.require(!rc.kernel_search && !rc.kernel, "kernel search not empty");
  c.detail += "max |rho(-z) - oracle| = " + detail::format_double(worst) + " over 100 claims; relevant by grid, kernel search empty";
  return c;
}

// 2. arbitrage example: GDV exists, none relevant
Check criterion2() {
  Check c;
  const Scenario s = bundled("arbitrage_example");
  const MarketCone m = s.market();
  const FtapReport f = ftap_report(m);
  const MeasurePolytope q = consistent_set(m);
  c.require(f.q_nonempty && same_set(vertices(q), {{0.0, 1.0}}, 1e-12), "consistent set is not {(0,1)}");
  c.require(!f.qe_nonempty, "equivalent measure found");
  c.require(!f.nfl && f.arbitrage.has_value(), "no arbitrage witness");
  if (f.arbitrage) c.require(cone_contains(m, *f.arbitrage) && f.arbitrage->values()[0] > 0.0, "arbitrage witness does not replay");
  const RiskMeasure wc = RiskMeasure::worst_case(q);
  c.require(check_gdv(m, wc, 100, 2).verdict, "worst case not certified GDV");
  const auto rc = check_relevance(m, wc);
  c.require(rc.verdict == Relevance::not_relevant, "worst case relevant");
  c.require(rc.witness && *rc.witness == Claim::indicator(2, 0), "witness is not 1_{w1}");
  c.require(rc.witness && wc(-*rc.witness) <= 1e-9, "witness does not replay");
  c.detail += "Q = {(0,1)}, no equivalent measure, arbitrage (1,0); worst case GDV, not relevant with witness (1,0)";
  return c;
}

// 3. Arrow-Debreu bid-ask markets
Check criterion3() {
  Check c;
  for (const char* name : {"arrow_debreu", "arrow_debreu_n2"}) {
    const Scenario s = bundled(name);
    const MarketCone m = s.market();
    const std::size_t n = m.dim();
    // quotes as stated in the scenario descriptions
    std::vector<double> ask(n, 0.0), bid(n, 0.0);
    std::vector<bool> traded(n, false);
    if (n == 2) {
      ask[1] = 0.6, bid[1] = 0.4, traded[1] = true;
    } else {
      ask[1] = 0.3, bid[1] = 0.2, ask[2] = 0.4, bid[2] = 0.25;
      traded[1] = traded[2] = true;
    }
    // corners of the box bid_j <= q_j <= ask_j with the untraded atom absorbing the rest
    std::vector<std::size_t> t;
    for (std::size_t j = 0; j < n; ++j) {
      if (traded[j]) t.push_back(j);
    }
    std::vector<std::vector<double>> corners;
    for (std::size_t mask = 0; mask < (std::size_t{1} << t.size()); ++mask) {
      std::vector<double> v(n, 0.0);
      double rest = 1.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        v[t[k]] = (mask >> k) & 1 ? ask[t[k]] : bid[t[k]];
        rest -= v[t[k]];
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (!traded[j]) v[j] = rest;
      }
      corners.push_back(v);
    }
    const MeasurePolytope q = consistent_set(m);
    c.require(same_set(vertices(q), corners, 1e-9), std::string(name) + ": vertices differ from the box corners");
    bool all_full = true;
    for (const auto& v : vertices(q)) all_full = all_full && v.min_weight() > 1e-9;
    c.require(all_full, std::string(name) + ": Q != Q^e");
    c.require(check_all_gdvs_relevant(m).verdict, std::string(name) + ": not all GDVs relevant");
    for (std::size_t j : t) {
      const Claim e = Claim::indicator(n, j);
      c.require(std::abs(superhedging_cost(m, -e).value() - ask[j]) <= 1e-8, std::string(name) + ": ask mismatch");
      c.require(std::abs(-superhedging_cost(m, e).value() - bid[j]) <= 1e-8, std::string(name) + ": bid mismatch");
    }
  }
  c.detail += "vertices = box corners, all full support, every GDV relevant, bounds = bid/ask (1e-8)";
  return c;
}

// 4. LP duality bridge
Check criterion4() {
  Check c;
  std::mt19937_64 rng(4);
  double worst = 0.0;
  int markets = 0;
  while (markets < 500) {
    const std::size_t n = 2 + markets % 5, k = markets % 5;
    const MarketCone m = harness::random_market(rng, n, k);
    const MeasurePolytope q = consistent_set(m);
    if (q.empty()) continue;
    ++markets;
    for (int t = 0; t < 10; ++t) {
      const Claim x = detail::random_claim(rng, n);
      const Extended p = superhedging_cost(m, x), d = dual_superhedge(q, x);
      if (!p.is_finite() || !d.is_finite()) {
        c.require(false, "infinite value on a consistent market");
        continue;
      }
      worst = std::max(worst, std::abs(p.value() - d.value()));
    }
  }
  c.require(worst <= 1e-7, "duality gap " + detail::format_double(worst));
  c.detail += "500 markets x 10 claims, max |primal - dual| = " + detail::format_double(worst);
  return c;
}

// 5 and 6 share the harness instances.
struct HarnessStats {
  int gdv = 0, gdv_agree = 0, non_gdv = 0, non_gdv_ok = 0;
  int relevant = 0, not_relevant = 0, lp_consistent = 0, oracle_consistent = 0;
};

// Not relevant iff some atom is missed by every zero-penalty measure.
bool oracle_relevant(const RiskMeasure& rho) {
  const auto& fl = std::get<FiniteListPenalty>(rho.penalty());
  for (std::size_t a = 0; a < rho.space().size(); ++a) {
    bool charged = false;
    for (std::size_t i = 0; i < fl.measures.size(); ++i) {
      if (fl.penalties[i] <= 1e-12 && fl.measures[i][a] > 1e-12) charged = true;
    }
    if (!charged) return false;
  }
  return true;
}

HarnessStats run_harness() {
  HarnessStats h;
  std::mt19937_64 rng(5);
  std::uint64_t seed = 0;
  while (h.gdv < 200 || h.non_gdv < 200) {
    const std::size_t n = 2 + seed % 5, k = 1 + seed % 4;
    const auto inst = harness::random_instance(rng, n, k);
    ++seed;
    if (h.gdv < 200) {
      ++h.gdv;
      const auto cert = check_gdv(inst.market, inst.gdv, 20, seed);
      std::vector<Claim> claims;
      for (int t = 0; t < 20; ++t) claims.push_back(detail::random_claim(rng, n));
      const bool fp = fixed_point_residual(inst.market, inst.gdv, claims) <= 1e-6;
      bool agree = fp;
      for (const char* id : {"2", "3", "7"}) agree = agree && cert.find(id)->status == Status::pass;
      if (agree && cert.verdict) ++h.gdv_agree;

      const auto rc = check_relevance(inst.market, inst.gdv);
      const auto z = extended_market(inst.market, inst.gdv).positive_witness();
      const bool orc = oracle_relevant(inst.gdv);
      if (rc.verdict == Relevance::relevant) {
        ++h.relevant;
        if (!z) ++h.lp_consistent;
      } else {
        ++h.not_relevant;
        if (z && detail::max_abs(z->span()) > 0.0 && inst.gdv(-*z) <= 1e-9) ++h.lp_consistent;
      }
      if ((rc.verdict == Relevance::relevant) == orc) ++h.oracle_consistent;
    }
    if (inst.non_gdv && h.non_gdv < 200) {
      ++h.non_gdv;
      const auto cert = check_gdv(inst.market, *inst.non_gdv, 20, seed);
      bool any_fail = false, any_pass = false;
      for (const char* id : {"2", "3", "7"}) {
        any_fail = any_fail || cert.find(id)->status == Status::fail;
        any_pass = any_pass || cert.find(id)->status == Status::pass;
      }
      if (any_fail && !any_pass && !cert.verdict) ++h.non_gdv_ok;
    }
  }
  return h;
}

Check criterion5(const HarnessStats& h) {
  Check c;
  c.require(h.gdv == 200 && h.gdv_agree == 200, "GDV disagreement");
  c.require(h.non_gdv == 200 && h.non_gdv_ok == 200, "non-GDV not rejected");
  c.detail += "GDV pairs agreeing " + std::to_string(h.gdv_agree) + "/" + std::to_string(h.gdv) +
              ", non-GDV rejected " + std::to_string(h.non_gdv_ok) + "/" + std::to_string(h.non_gdv);
  return c;
}

Check criterion6(const HarnessStats& h) {
  Check c;
  c.require(h.lp_consistent == h.gdv, "extended market LP disagrees");
  c.require(h.oracle_consistent == h.gdv, "atom-support oracle disagrees");
  c.require(h.relevant > 0 && h.not_relevant > 0, "harness did not exercise both verdicts");
  c.detail += std::to_string(h.relevant) + " relevant / " + std::to_string(h.not_relevant) +
              " not relevant; LP consistent " + std::to_string(h.lp_consistent) + ", support oracle consistent " +
              std::to_string(h.oracle_consistent);
  return c;
}

// 7. shortfall
Check criterion7() {
  Check c;
  const Scenario fr = bundled("frictionless");
  double worst0 = 0.0;
  for (auto [p, d] : {std::pair{1.0, 0.05}, {2.0, 0.01}, {2.0, 0.25}}) {
    const ShortfallMeasure sm(fr.market(), LossFunction::power(p), d);
    const double v = sm.price(Claim::constant(fr.atoms.size(), 0.0));
    worst0 = std::max(worst0, std::abs(v + std::pow(d, 1.0 / p)));
  }
  c.require(worst0 <= 1e-6, "rho_l(0) off by " + detail::format_double(worst0));

  double worst_violation = 0.0;
  bool raw_fails = true;
  std::mt19937_64 rng(7);
  for (const auto& name : kBundled) {
    const Scenario s = bundled(name);
    const ShortfallMeasure sm = *s.shortfall_measure();
    const double tol = 1e-8 + 4.0 * sm.options().tol;
    const auto rhat = normalized_shortfall(sm);
    for (int k = 0; k < 200; ++k) {
      const Claim x = detail::random_claim(rng, s.atoms.size());
      const double v = containment_violation(s.market(), rhat, x);
      worst_violation = std::max(worst_violation, v);
      c.require(v <= tol, name + ": containment violated by " + detail::format_double(v));
    }
    const auto cert = check_gdv_sampled(s.market(), sm, 5, 1);
    raw_fails = raw_fails && !cert.verdict && cert.find("normalization")->status == Status::fail;
  }
  c.require(raw_fails, "raw shortfall passed normalization");
  c.detail += "max |rho_l(0) + l^-1(delta)| = " + detail::format_double(worst0) +
              "; normalized containment on 5 x 200 claims, max violation " + detail::format_double(worst_violation) +
              "; raw fails normalization";
  return c;
}

// 8. indifference operator
Check criterion8() {
  Check c;
  const Scenario fr = bundled("frictionless");
  const RiskMeasure eta = *fr.risk_measure();
  const IndifferencePricer pf(fr.market(), eta);
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Claim x = detail::random_claim(rng, fr.atoms.size());
    // log E[e^{-x}] in closed form
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += fr.probabilities[i] * std::exp(-x[i]);
    worst = std::max(worst, std::abs(pf.price(x) - std::log(s)));
  }
  c.require(worst <= 1e-6, "frictionless mismatch " + detail::format_double(worst));

  int inside = 0, nonreplicable = 0;
  for (const char* name : {"arrow_debreu", "arrow_debreu_n2"}) {
    const Scenario s = bundled(name);
    const MarketCone m = s.market();
    const IndifferencePricer p(m, *s.risk_measure());
    const auto ieta = p.as_risk_measure();
    c.require(ieta.has_value() && check_gdv(m, *ieta, 100, 8).verdict, std::string(name) + ": I(entropic) not certified");
    for (const auto& [cn, payoff] : s.claims) {
      const Claim x(payoff);
      const double lo = -superhedging_cost(m, x).value(), hi = superhedging_cost(m, -x).value();
      if (hi - lo <= 1e-9) continue;
      ++nonreplicable;
      const double ask = p.price(-x), bid = -p.price(x);
      const bool ok = lo < bid - 1e-9 && bid <= ask && ask < hi - 1e-9;
      if (ok) ++inside;
      c.require(ok, std::string(name) + "/" + cn + ": price not strictly inside the bounds");
      if (ieta) c.require(std::abs((*ieta)(-x) - ask) <= 1e-9, std::string(name) + "/" + cn + ": closed form and pricer differ");
    }
  }
  c.detail += "frictionless max |I(eta) - eta| = " + detail::format_double(worst) + "; " + std::to_string(inside) + "/" +
              std::to_string(nonreplicable) + " nonreplicable claims strictly inside";
  return c;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Check()>& f) {
    Check c;
    try {
      c = f();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failed;
    std::printf("%s %d %s: %s\n", c.ok ? "PASS" : "FAIL", id, title, c.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "quadratic example", criterion1);
  report(2, "arbitrage example", criterion2);
  report(3, "Arrow-Debreu bid-ask", criterion3);
  report(4, "superhedging duality", criterion4);
  HarnessStats h;
  bool harness_ok = true;
  std::string harness_error;
  try {
    h = run_harness();
  } catch (const std::exception& e) {
    harness_ok = false;
    harness_error = e.what();
  }
  auto from_harness = [&](auto f) {
    return [&, f]() {
      if (!harness_ok) throw std::runtime_error(harness_error);
      return f(h);
    };
  };
  report(5, "GDV condition equivalence", from_harness(criterion5));
  report(6, "relevance vs extended market", from_harness(criterion6));
  report(7, "shortfall", criterion7);
  report(8, "indifference operator", criterion8);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d/8 criteria passed in %.1f s\n", 8 - failed, secs);
  return failed == 0 ? 0 : 1;
}
