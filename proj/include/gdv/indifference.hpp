#ifndef GDV_INDIFFERENCE_HPP
#define GDV_INDIFFERENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/market.hpp"
#include "gdv/optim/frank_wolfe.hpp"
#include "gdv/optim/linear_program.hpp"
#include "gdv/optim/projected_gradient.hpp"
#include "gdv/risk_measure.hpp"

namespace gdv {

/// inf_m rho(m) = -inf: the pricer cannot be used. ray() is a claim m in M
/// along which rho(t m) decreases without bound.
class DegenerateOffsetError : public Error {
 public:
  explicit DegenerateOffsetError(Claim ray)
      : Error("indifference: inf over M of rho is -inf (degenerate offset)"), ray_(std::move(ray)) {}
  const Claim& ray() const noexcept { return ray_; }

 private:
  Claim ray_;
};

struct IndifferenceQuote {
  double value;
  /// Hedge weights lambda (one per generator) attaining, or approaching,
  /// the inner infimum. Empty when no primal hedge is computed.
  std::vector<double> hedge;
  /// "lp" for the hedged linear program, "dual" for the maximization over
  /// consistent measures.
  std::string method;
};

namespace detail {

/// q . z - q(first atom)^2
struct QuadraticObjective {
  std::vector<double> z;
  double value(std::span<const double> q) const {
    double v = -q[0] * q[0];
    for (std::size_t i = 0; i < q.size(); ++i) v += q[i] * z[i];
    return v;
  }
  std::vector<double> supergradient(std::span<const double> q) const {
    std::vector<double> g(z);
    g[0] -= 2.0 * q[0];
    return g;
  }
};

inline std::vector<double> negated(const Claim& x) {
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = -x[i];
  return z;
}

}  // namespace detail

/// The risk-indifference operator I(rho) relative to a market cone:
/// I(rho)(x) = inf_{m in M} rho(x + m) - inf_{m in M} rho(m).
class IndifferencePricer {
 public:
  IndifferencePricer(MarketCone market, RiskMeasure base)
      : market_(std::move(market)), base_(std::move(base)), q_(consistent_set(market_)) {
    if (!(market_.space() == base_.space())) throw DimensionError("indifference: market and risk measure spaces differ");
    if (auto dom = base_.penalty_domain()) dual_domain_ = q_.intersect(*dom);
    offset_ = compute_offset();
  }

  const MarketCone& market() const noexcept { return market_; }
  const RiskMeasure& base() const noexcept { return base_; }
  const MeasurePolytope& consistent() const noexcept { return q_; }

  /// inf_{m in M} rho(m), or -inf.
  Extended offset() const {
    if (ray_) return Extended::minus_infinity();
    return Extended::finite(offset_);
  }
  bool degenerate() const noexcept { return ray_.has_value(); }
  const std::optional<Claim>& degenerate_ray() const noexcept { return ray_; }

  /// Accuracy of price(): exact for LP-based bases, Frank-Wolfe gap otherwise.
  double accuracy() const { return uses_lp() ? 0.0 : 4.0 * detail::kEntropicFwTol; }

  IndifferenceQuote quote(const Claim& x) const {
    require_ok(x);
    if (uses_lp()) {
      auto r = hedged_lp(x);
      return {r.value - offset_, std::move(r.hedge), "lp"};
    }
    IndifferenceQuote out{dual_sup(detail::negated(x)) - offset_, {}, "dual"};
    if (!std::holds_alternative<EntropicOnPolytopePenalty>(base_.penalty())) out.hedge = primal_hedge(x);
    return out;
  }

  double price(const Claim& x) const { return quote(x).value; }
  double operator()(const Claim& x) const { return price(x); }

  /// sup_{Q in consistent set} { E_Q[-x] - rho*(Q) } - offset, computed by
  /// a route independent of quote() for LP-based bases.
  double dual_price(const Claim& x) const {
    require_ok(x);
    if (auto* fl = std::get_if<FiniteListPenalty>(&base_.penalty())) {
      return finite_list_dual(*fl, x) - finite_list_dual(*fl, Claim::constant(x.size(), 0.0));
    }
    if (uses_lp()) {
      auto r = dual_domain_->maximize(detail::negated(x));
      return r->second - offset_;
    }
    return dual_sup(detail::negated(x)) - offset_;
  }

  /// I(rho) as a risk measure in dual form, for the bases where it has one
  /// of the library's penalty shapes.
  std::optional<RiskMeasure> as_risk_measure() const {
    if (ray_) return std::nullopt;
    if (auto* e = std::get_if<EntropicPenalty>(&base_.penalty())) {
      return RiskMeasure::entropic_on_polytope(e->gamma, q_);
    }
    if (auto* e = std::get_if<EntropicOnPolytopePenalty>(&base_.penalty())) {
      return RiskMeasure::entropic_on_polytope(e->gamma, *dual_domain_);
    }
    if (std::holds_alternative<WorstCasePenalty>(base_.penalty())) return RiskMeasure::worst_case(*dual_domain_);
    return std::nullopt;
  }

 private:
  struct LpHedge {
    double value;
    std::vector<double> hedge;
  };

  bool uses_lp() const {
    return std::holds_alternative<FiniteListPenalty>(base_.penalty()) ||
           std::holds_alternative<WorstCasePenalty>(base_.penalty());
  }

  void require_ok(const Claim& x) const {
    if (x.size() != market_.dim()) throw DimensionError("indifference: claim/space size mismatch");
    if (ray_) throw DegenerateOffsetError(*ray_);
  }

  double compute_offset() {
    const Claim zero = Claim::constant(market_.dim(), 0.0);
    if (uses_lp()) {
      auto r = hedged_lp_raw(zero);
      if (r.status == optim::LpStatus::unbounded) {
        ray_ = ray_claim(r.ray);
        return 0.0;
      }
      return -r.value;
    }
    if (dual_domain_->empty()) {
      ray_ = separating_ray(*base_.penalty_domain());
      return 0.0;
    }
    return dual_sup(std::vector<double>(market_.dim(), 0.0));
  }

  // Variable layout for the hedged LPs: [t, w..., lambda..., s...] where w
  // are multipliers of the worst-case polytope rows (absent for
  // finite_list) and s is free disposal.
  std::size_t num_w() const {
    if (auto* w = std::get_if<WorstCasePenalty>(&base_.penalty())) return w->polytope.constraints().size();
    return 0;
  }

  /// min over lambda, s >= 0 of rho(x + G lambda - s), maximize -t form.
  optim::LpOutcome hedged_lp_raw(const Claim& x) const {
    const std::size_t n = market_.dim(), k = market_.generators().size(), r = num_w();
    const auto& g = market_.generators();
    optim::LinearProgram lp(1 + r + k + n);
    lp.lower[0] = std::nullopt;
    lp.objective[0] = -1.0;
    if (auto* fl = std::get_if<FiniteListPenalty>(&base_.penalty())) {
      // t >= -Q_i . (x + G lambda - s) - c_i
      for (std::size_t i = 0; i < fl->measures.size(); ++i) {
        const Measure& q = fl->measures[i];
        std::vector<double> row(1 + k + n, 0.0);
        row[0] = -1.0;
        for (std::size_t j = 0; j < k; ++j) row[1 + j] = -q.expectation(g[j]);
        for (std::size_t a = 0; a < n; ++a) row[1 + k + a] = q[a];
        lp.add_le(std::move(row), q.expectation(x) + fl->penalties[i]);
      }
    } else {
      // dual of the inner LP over the polytope:
      // t + sum_r w_r h_r + G lambda - s >= -x
      const auto& h = std::get<WorstCasePenalty>(base_.penalty()).polytope.constraints();
      for (std::size_t a = 0; a < n; ++a) {
        std::vector<double> row(1 + r + k + n, 0.0);
        row[0] = 1.0;
        for (std::size_t c = 0; c < r; ++c) row[1 + c] = h[c][a];
        for (std::size_t j = 0; j < k; ++j) row[1 + r + j] = g[j][a];
        row[1 + r + k + a] = -1.0;
        lp.add_ge(std::move(row), -x[a]);
      }
    }
    return optim::solve_lp(lp);
  }

  LpHedge hedged_lp(const Claim& x) const {
    auto out = hedged_lp_raw(x);
    if (!out.optimal()) throw SolverError("indifference: hedged LP not optimal with finite offset");
    const std::size_t r = num_w(), k = market_.generators().size();
    std::vector<double> lam(out.primal.begin() + static_cast<std::ptrdiff_t>(1 + r),
                            out.primal.begin() + static_cast<std::ptrdiff_t>(1 + r + k));
    return {-out.value, std::move(lam)};
  }

  Claim ray_claim(const std::vector<double>& ray) const {
    const std::size_t n = market_.dim(), k = market_.generators().size(), r = num_w();
    std::vector<double> lam(ray.begin() + static_cast<std::ptrdiff_t>(1 + r),
                            ray.begin() + static_cast<std::ptrdiff_t>(1 + r + k));
    Claim m = market_.combine(lam);
    std::vector<double> s(ray.begin() + static_cast<std::ptrdiff_t>(1 + r + k),
                          ray.begin() + static_cast<std::ptrdiff_t>(1 + r + k + n));
    return m - Claim(std::move(s));
  }

  /// Direction m in M with q . m > 0 on the whole domain, found as the ray
  /// of the worst-case hedged LP over that domain.
  Claim separating_ray(const MeasurePolytope& domain) const {
    IndifferencePricer wc(market_, RiskMeasure::worst_case(domain));
    return *wc.degenerate_ray();
  }

  double dual_sup(std::vector<double> z) const {
    const optim::FwOptions opt{detail::kEntropicFwTol, 200000};
    const auto& pen = base_.penalty();
    const auto& p = base_.space().probabilities();
    if (auto* e = std::get_if<EntropicPenalty>(&pen)) {
      return optim::maximize_concave_over_polytope(detail::EntropicObjective{std::move(z), p, e->gamma, 0.0},
                                                   *dual_domain_, opt)
          .value;
    }
    if (auto* e = std::get_if<EntropicOnPolytopePenalty>(&pen)) {
      return optim::maximize_concave_over_polytope(detail::EntropicObjective{std::move(z), p, e->gamma, -e->shift},
                                                   *dual_domain_, opt)
          .value;
    }
    return optim::maximize_concave_over_polytope(detail::QuadraticObjective{std::move(z)}, *dual_domain_, opt).value;
  }

  /// lambda minimizing rho(x + G lambda) by projected gradient; the
  /// gradient in lambda is -G^T Q* with Q* the maximizing measure.
  std::vector<double> primal_hedge(const Claim& x) const {
    const auto& g = market_.generators();
    if (g.empty()) return {};
    auto value = [&](const std::vector<double>& lam) { return base_.evaluate(x + market_.combine(lam)); };
    auto grad = [&](const std::vector<double>& lam) {
      const Measure q = base_.evaluate_detailed(x + market_.combine(lam)).argmax;
      std::vector<double> d(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) d[j] = -q.expectation(g[j]);
      return d;
    };
    optim::PgOptions opt;
    opt.max_iter = 2000;
    opt.tol = 1e-10;
    return optim::minimize_nonnegative(value, grad, std::vector<double>(g.size(), 0.0), opt).x;
  }

  /// max over mixtures mu of sum mu_i (E_{Q_i}[-x] - c_i) with the mixture
  /// consistent; -inf handled by the caller's degenerate check.
  double finite_list_dual(const FiniteListPenalty& fl, const Claim& x) const {
    const std::size_t k = fl.measures.size();
    optim::LinearProgram lp(k);
    for (std::size_t i = 0; i < k; ++i) lp.objective[i] = -fl.measures[i].expectation(x) - fl.penalties[i];
    lp.add_eq(std::vector<double>(k, 1.0), 1.0);
    for (const auto& g : market_.generators()) {
      std::vector<double> row(k);
      for (std::size_t i = 0; i < k; ++i) row[i] = fl.measures[i].expectation(g);
      lp.add_le(std::move(row), 0.0);
    }
    auto out = optim::solve_lp(lp);
    if (!out.optimal()) throw SolverError("indifference: dual LP infeasible with finite offset");
    return out.value;
  }

  MarketCone market_;
  RiskMeasure base_;
  MeasurePolytope q_;
  std::optional<MeasurePolytope> dual_domain_;
  double offset_ = 0.0;
  std::optional<Claim> ray_;
};

inline Extended offset(const MarketCone& market, const RiskMeasure& base) {
  return IndifferencePricer(market, base).offset();
}

inline double indifference_price(const IndifferencePricer& pricer, const Claim& x) { return pricer.price(x); }

/// max over the claims of |I(rho)(x) - rho(x)|.
inline double fixed_point_residual(const MarketCone& market, const RiskMeasure& rho, std::span<const Claim> claims) {
  const IndifferencePricer pricer(market, rho);
  double r = 0.0;
  for (const auto& x : claims) r = std::max(r, std::abs(pricer.price(x) - rho.evaluate(x)));
  return r;
}

}  // namespace gdv

#endif  // GDV_INDIFFERENCE_HPP
