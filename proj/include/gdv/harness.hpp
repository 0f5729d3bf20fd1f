#ifndef GDV_HARNESS_HPP
#define GDV_HARNESS_HPP

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "gdv/market.hpp"
#include "gdv/risk_measure.hpp"

/// Random instances for the condition-equivalence harness (CLI fuzz command
/// and acceptance suite).
namespace gdv::harness {

struct Instance {
  MarketCone market;
  RiskMeasure gdv;                     // finite_list supported in the consistent set
  std::optional<RiskMeasure> non_gdv;  // same list with one measure pushed outside
};

/// k generators on n atoms, each shifted by a constant so that a random
/// full-support q0 prices it at <= 0; the consistent set is never empty.
template <class Rng>
MarketCone random_market(Rng& rng, std::size_t n, std::size_t k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> q0(n);
  double s = 0.0;
  for (double& v : q0) s += (v = 0.1 + (u(rng) + 1.0));
  for (double& v : q0) v /= s;
  std::vector<Claim> gens;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> g(n);
    for (double& v : g) v = u(rng);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += q0[i] * g[i];
    // about half the generators sit exactly on q0's pricing hyperplane
    const double shift = (e > 0.0 || j % 2 == 1) ? e : 0.0;
    for (double& v : g) v -= shift;
    gens.emplace_back(std::move(g));
  }
  return MarketCone(Space::uniform(n), std::move(gens));
}

/// 1..3 measures, each a vertex of the consistent set or a random mixture
/// of vertices; penalties in [0, 0.5] with the first one 0.
template <class Rng>
RiskMeasure random_gdv(Rng& rng, const MeasurePolytope& q) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto vs = vertices(q);
  const std::size_t count = 1 + static_cast<std::size_t>(u(rng) * 3.0) % 3;
  std::vector<Measure> ms;
  std::vector<double> cs;
  for (std::size_t i = 0; i < count; ++i) {
    if (u(rng) < 0.5) {
      ms.push_back(vs[static_cast<std::size_t>(u(rng) * static_cast<double>(vs.size())) % vs.size()]);
    } else {
      std::vector<double> w(q.dim(), 0.0);
      double tot = 0.0;
      std::vector<double> mix(vs.size());
      for (double& m : mix) tot += (m = -std::log(std::max(u(rng), 1e-300)));
      for (std::size_t v = 0; v < vs.size(); ++v) {
        for (std::size_t a = 0; a < q.dim(); ++a) w[a] += mix[v] / tot * vs[v][a];
      }
      ms.push_back(Measure::from_solver(std::move(w)));
    }
    cs.push_back(i == 0 ? 0.0 : 0.5 * u(rng));
  }
  return RiskMeasure::finite_list(q.space(), std::move(ms), std::move(cs));
}

/// Replaces one measure of a finite_list GDV by a measure violating some
/// generator constraint by at least 1e-7. nullopt when the consistent set
/// is the whole simplex (no measure can be pushed outside).
template <class Rng>
std::optional<RiskMeasure> push_outside(Rng& rng, const MarketCone& market, const RiskMeasure& gdv) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& fl = std::get<FiniteListPenalty>(gdv.penalty());
  const std::size_t n = market.dim();
  for (const auto& g : market.generators()) {
    std::size_t atom = 0;
    for (std::size_t a = 1; a < n; ++a) {
      if (g[a] > g[atom]) atom = a;
    }
    if (g[atom] < 1e-6) continue;
    const std::size_t idx = static_cast<std::size_t>(u(rng) * static_cast<double>(fl.measures.size())) % fl.measures.size();
    const Measure& base = fl.measures[idx];
    const double theta = 0.5 + 0.5 * u(rng);
    std::vector<double> w(n);
    for (std::size_t a = 0; a < n; ++a) w[a] = (1.0 - theta) * base[a] + (a == atom ? theta : 0.0);
    Measure out = Measure::from_solver(std::move(w));
    if (out.expectation(g) < 1e-7) out = Measure::from_solver(Claim::indicator(n, atom).values());
    auto ms = fl.measures;
    ms[idx] = out;
    return RiskMeasure::finite_list(market.space(), std::move(ms), fl.penalties);
  }
  return std::nullopt;
}

template <class Rng>
Instance random_instance(Rng& rng, std::size_t n, std::size_t k) {
  MarketCone m = random_market(rng, n, k);
  RiskMeasure g = random_gdv(rng, consistent_set(m));
  auto bad = push_outside(rng, m, g);
  return Instance{std::move(m), std::move(g), std::move(bad)};
}

}  // namespace gdv::harness

#endif  // GDV_HARNESS_HPP
