#ifndef GDV_SUPERHEDGE_HPP
#define GDV_SUPERHEDGE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/market.hpp"
#include "gdv/optim/linear_program.hpp"

namespace gdv {

struct SuperhedgeResult {
  Extended cost = Extended::minus_infinity();
  /// Hedge weights lambda attaining the cost (finite case).
  std::vector<double> hedge;
  /// Direction (dc, dlambda) along which the cost decreases forever (-inf case).
  std::vector<double> ray;
};

/// rho0(x) = inf{ c : c + sum_j lambda_j g_j + x >= 0, lambda >= 0 }.
inline SuperhedgeResult superhedge(const MarketCone& market, const Claim& x) {
  if (x.size() != market.dim()) throw DimensionError("superhedge: claim/space size mismatch");
  const auto& gens = market.generators();
  const std::size_t k = gens.size();
  // variables: c (free), lambda_1..k >= 0; maximize -c
  optim::LinearProgram lp(k + 1);
  lp.lower[0] = std::nullopt;
  lp.objective[0] = -1.0;
  for (std::size_t i = 0; i < market.dim(); ++i) {
    std::vector<double> row(k + 1);
    row[0] = -1.0;
    for (std::size_t j = 0; j < k; ++j) row[j + 1] = -gens[j][i];
    lp.add_le(std::move(row), x[i]);
  }
  const auto out = optim::solve_lp(lp);
  SuperhedgeResult r;
  if (out.status == optim::LpStatus::unbounded) {
    r.ray = out.ray;
    return r;
  }
  if (!out.optimal()) throw SolverError("superhedge: LP unexpectedly infeasible");
  r.cost = Extended::finite(out.primal[0]);
  r.hedge.assign(out.primal.begin() + 1, out.primal.end());
  return r;
}

/// Superhedging functional rho0(x); -inf sentinel iff the consistent set is empty.
inline Extended superhedging_cost(const MarketCone& market, const Claim& x) {
  return superhedge(market, x).cost;
}

/// sup over the consistent set of E_Q[-x]; -inf sentinel on an empty set.
inline Extended dual_superhedge(const MeasurePolytope& q, const Claim& x) {
  if (x.size() != q.dim()) throw DimensionError("dual_superhedge: claim/space size mismatch");
  if (q.empty()) return Extended::minus_infinity();
  std::vector<double> obj(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) obj[i] = -x[i];
  auto r = q.maximize(obj);
  if (!r) return Extended::minus_infinity();
  return Extended::finite(r->second);
}

enum class BoundKind { no_arbitrage, good_deal };

inline const char* to_string(BoundKind k) {
  return k == BoundKind::no_arbitrage ? "no-arbitrage" : "good-deal";
}

/// Price interval for a claim. Either end may be an infinite sentinel when
/// the market admits no consistent measure.
struct PriceBound {
  Extended lower;
  Extended upper;
  BoundKind kind;

  bool contains(double v, double tol) const {
    return (!lower.is_finite() || v >= lower.value() - tol) && (!upper.is_finite() || v <= upper.value() + tol);
  }
};

inline Extended negate(const Extended& e) {
  if (e.is_finite()) return Extended::finite(-e.value());
  return e.is_minus_infinity() ? Extended::plus_infinity() : Extended::minus_infinity();
}

/// [-rho0(x), rho0(-x)].
inline PriceBound no_arbitrage_bound(const MarketCone& market, const Claim& x) {
  return PriceBound{negate(superhedging_cost(market, x)), superhedging_cost(market, -x), BoundKind::no_arbitrage};
}

struct FtapReport {
  bool q_nonempty = false;
  bool one_in_M = false;
  bool qe_nonempty = false;
  bool nfl = false;
  std::optional<Measure> consistent_witness;  // some Q in the consistent set
  std::optional<Measure> equivalent_witness;  // some Q with full support
  std::optional<Claim> arbitrage;             // nonzero z in M, z >= 0
  std::optional<std::vector<double>> one_hedge;  // lambda with sum lambda_j g_j >= 1
  double max_min_weight = 0.0;

  bool consistent() const { return q_nonempty == !one_in_M && qe_nonempty == nfl; }
};

namespace detail {

/// max sum(z) s.t. 0 <= z <= 1, z <= sum_j lambda_j g_j, lambda >= 0.
inline std::pair<double, Claim> max_arbitrage(const MarketCone& market) {
  const std::size_t n = market.dim();
  const auto& gens = market.generators();
  const std::size_t k = gens.size();
  optim::LinearProgram lp(n + k);
  for (std::size_t i = 0; i < n; ++i) lp.objective[i] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n + k, 0.0);
    row[i] = 1.0;
    for (std::size_t j = 0; j < k; ++j) row[n + j] = -gens[j][i];
    lp.add_le(std::move(row), 0.0);
    std::vector<double> cap(n + k, 0.0);
    cap[i] = 1.0;
    lp.add_le(std::move(cap), 1.0);
  }
  const auto out = optim::solve_lp(lp);
  if (!out.optimal()) throw SolverError("max_arbitrage: LP failed");
  std::vector<double> z(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(n));
  for (double& v : z) {
    if (v < Tolerances::feasibility) v = 0.0;
  }
  return {out.value, Claim(std::move(z))};
}

/// lambda >= 0 with sum_j lambda_j g_j >= 1, if any.
inline std::optional<std::vector<double>> dominate_one(const MarketCone& market) {
  const auto& gens = market.generators();
  optim::LinearProgram lp(gens.size());
  for (std::size_t i = 0; i < market.dim(); ++i) {
    std::vector<double> row(gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) row[j] = gens[j][i];
    lp.add_ge(std::move(row), 1.0);
  }
  const auto out = optim::solve_lp(lp);
  if (out.status == optim::LpStatus::infeasible) return std::nullopt;
  return out.primal;
}

}  // namespace detail

/// Existence checks: consistent set vs. 1 in M, equivalent measures vs. no
/// arbitrage. Each flag comes from its own LP so the equivalences can be
/// cross-checked; every verdict carries a witness.
inline FtapReport ftap_report(const MarketCone& market) {
  FtapReport r;
  const MeasurePolytope q = consistent_set(market);
  r.q_nonempty = !q.empty();
  if (r.q_nonempty) {
    r.consistent_witness = q.maximize(std::vector<double>(q.dim(), 0.0))->first;
  }
  r.one_hedge = detail::dominate_one(market);
  r.one_in_M = r.one_hedge.has_value();
  r.equivalent_witness = has_equivalent_measure(q);
  r.qe_nonempty = r.equivalent_witness.has_value();
  if (r.equivalent_witness) r.max_min_weight = r.equivalent_witness->min_weight();
  auto [value, z] = detail::max_arbitrage(market);
  r.nfl = value <= Tolerances::feasibility;
  if (!r.nfl) r.arbitrage = std::move(z);
  return r;
}

}  // namespace gdv

#endif  // GDV_SUPERHEDGE_HPP
